//! Quadrature of the rebit separability function in the Bloore ratio
//! variable against its exact rational values.

use sepscope::analytic::{bloore_integral_checks, jac_real_nu, jac_real_nu_direct};

fn main() -> sepscope::Result<()> {
    let report = bloore_integral_checks()?;
    for c in [&report.integral, &report.probability] {
        println!(
            "{:<50} = {:.16e}  exact {:<9} rel err {:.1e}  {}",
            c.label,
            c.computed,
            c.exact_text,
            c.relative_error,
            if c.pass { "PASS" } else { "FAIL" }
        );
    }
    println!("{} integrand evaluations, error estimate {:.1e}", report.evaluations, report.quadrature_error);

    // Near nu = 1 the closed form loses most of its digits to cancellation.
    println!("\n{:>12} {:>24} {:>24}", "nu", "series/direct", "direct only");
    for nu in [0.5, 0.9, 0.99, 0.999, 0.9999] {
        println!("{nu:>12} {:>24.16e} {:>24.16e}", jac_real_nu(nu)?, jac_real_nu_direct(nu));
    }
    Ok(())
}
