//! Pushforward measure of complex local conjugations binned over d, with the
//! separable share of the tetrahedron.
//!
//!     cargo run --release --example viz_qubit -- [qmc points]

use sepscope::viz::{qubit_measure_bins, QubitVizConfig};

fn main() -> sepscope::Result<()> {
    let n: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2_000);
    let mut cfg = QubitVizConfig::new(n, 7, 500.0, 42);
    cfg.workers = 4;
    let res = qubit_measure_bins(&cfg)?;
    println!("separability estimate {:.4} +- {:.4}", res.separability.p, res.separability.stderr);
    println!("negative jacobian fraction {:.3}", res.negative_jacobian_fraction);
    println!("{:?}", res.counts);
    for m in &res.marginals {
        let total: f64 = m.values.iter().sum();
        println!("marginal {}-{}: {} cells, total {:.3e}", m.axes[0], m.axes[1], m.values.len(), total);
    }
    Ok(())
}
