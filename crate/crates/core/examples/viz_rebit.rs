//! Pushforward measure of real local conjugations over the d1-d3 plane.
//!
//!     cargo run --release --example viz_rebit -- [qmc points] [grid]

use sepscope::viz::{rebit_measure_map, RebitVizConfig};

fn main() -> sepscope::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(1_000);
    let grid: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(21);
    let mut cfg = RebitVizConfig::new(n, grid, 42);
    cfg.workers = 4;
    let res = rebit_measure_map(&cfg)?;
    let t = &res.tally;
    println!("measure: octahedron {:.4e}, tetra minus octa {:.4e}, cube minus tetra {:.4e}", t.measure_octahedron, t.measure_tetra_minus_octa, t.measure_cube_minus_tetra);
    println!("cube minus tetra / tetra = {:.4}", res.ratios.cube_minus_tetra_over_tetra);
    println!("octa / tetra             = {:.4}", res.ratios.octa_over_tetra);
    println!("entangled / witness      = {:.4}", res.ratios.entangled_over_witness);
    println!("skipped samples {}", res.skipped);
    Ok(())
}
