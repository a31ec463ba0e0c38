//! All randomized verification suites at their default sizes.
//!
//! cargo run --release --example verify_suites

use degnn::verify::{run_suite, Suite, TrialSizes};

fn main() -> degnn::Result<()> {
    for suite in Suite::ALL {
        println!("{}", run_suite(suite, 100, TrialSizes::default(), 0)?);
    }
    Ok(())
}
