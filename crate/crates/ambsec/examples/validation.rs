//! Run the cross-validation suite at desk scale: simulation against the
//! analytic distributions, contour against master SOP, asymptote, diversity
//! order, trends, and the special-function identities.

use ambsec::sweep::{validate_all, ValidationBudget};
use ambsec::sysmodel::SystemConfig;

fn main() {
    let budget = ValidationBudget {
        cdf_trials: 100_000,
        sop_trials: 400_000,
        seed: 20_240_901,
    };
    let report = validate_all(&SystemConfig::default(), &budget).expect("suite runs");
    for c in &report.checks {
        println!(
            "{} {:35} measured {:12.4e} threshold {:10.3e} {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.id,
            c.measured,
            c.threshold,
            c.detail
        );
    }
    println!("\noverall: {}", if report.passed { "all checks passed" } else { "FAILURES present" });
    std::process::exit(if report.passed { 0 } else { 1 });
}
