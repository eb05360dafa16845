//! Arrow-count witnesses for the eleven exceptional quivers.
//!
//! `cargo run --example exceptional_spectra`

use qml_core::class::{enumerate_class, Verdict};
use qml_core::generators::exceptional_quiver;
use qml_core::verify::verify_exceptional;
use qml_core::ExceptionalName;

fn main() {
    for name in ExceptionalName::ALL {
        let q = exceptional_quiver(name);
        let r = enumerate_class(&q, 20_000, 2).expect("valid budget");
        let size = match r.verdict {
            Verdict::ExhaustedFinite => format!("{} classes", r.class_count()),
            v => format!("{v:?} after {} classes", r.class_count()),
        };
        let claim = verify_exceptional(name);
        println!(
            "{name:<6} n={:<2} arrows={:<2} {size:<32} counts {:?}\n       {}",
            q.n(),
            q.arrow_count(),
            r.arrow_count_set(),
            claim.detail
        );
    }
}
