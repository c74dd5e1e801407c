//! Regenerates the golden threshold table. Output is the literal rows for
//! `src/golden.rs`.

use pressctl_core::golden::{GOLDEN_HORIZON, GOLDEN_STEPS_PER_DELAY, GOLDEN_TOL};
use pressctl_core::threshold::bisect_threshold;

fn main() {
    for beta in [1.0, 2.0, 5.0, 10.0, 50.0] {
        let est =
            bisect_threshold(beta, GOLDEN_TOL, GOLDEN_HORIZON, GOLDEN_STEPS_PER_DELAY).unwrap();
        println!(
            "    ({:?}, {:?}, {:?}, {:?}),",
            beta, est.g, est.bracket_lo, est.bracket_hi
        );
    }
}
