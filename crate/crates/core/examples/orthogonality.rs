//! Weighted correlation of det(rho) and det(rho^PT) over two-rebit states.

use sepscope::profile::determinant_orthogonality;
use sepscope::sampling::{SamplerConfig, SamplerKind};
use sepscope::Field;

fn main() -> sepscope::Result<()> {
    let n: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200_000);
    let cfg = SamplerConfig::new(Field::Rebit, SamplerKind::MonteCarlo, 42, n).with_workers(4);
    let est = determinant_orthogonality(&cfg)?;
    println!("<det rho * det rho^PT> / <det rho^2> = {:+.4} +- {:.4} (z {:+.2})", est.ratio, est.stderr, est.z_score());
    Ok(())
}
