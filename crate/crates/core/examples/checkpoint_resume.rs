//! Interrupting a profile run, saving a checkpoint and resuming it.

use sepscope::profile::{Checkpoint, ProfileRun, Axis, Ppt};
use sepscope::sampling::{SamplerConfig, SamplerKind};
use sepscope::Field;

fn main() -> sepscope::Result<()> {
    let cfg = SamplerConfig::new(Field::Rebit, SamplerKind::MonteCarlo, 42, 8192).with_workers(2);
    let dir = std::env::temp_dir().join("sepscope-checkpoint-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("radial.ck");

    let mut first = ProfileRun::new(Axis::Radial, cfg, 51, &Ppt)?;
    first.advance(4096)?;
    first.checkpoint().save(&path)?;
    println!("saved at sample {} to {}", first.next_index(), path.display());

    // A different worker count is allowed; anything else must match.
    let mut resumed = ProfileRun::from_checkpoint(Checkpoint::load(&path)?, Axis::Radial, cfg.with_workers(4), 51, &Ppt)?;
    resumed.advance(u64::MAX)?;

    let mut straight = ProfileRun::new(Axis::Radial, cfg, 51, &Ppt)?;
    straight.advance(u64::MAX)?;
    println!("resumed equals uninterrupted: {}", resumed.finish()? == straight.finish()?);

    let wrong = SamplerConfig { field: Field::Qubit, ..cfg };
    match ProfileRun::from_checkpoint(Checkpoint::load(&path)?, Axis::Radial, wrong, 51, &Ppt) {
        Err(e) => println!("qubit resume rejected: {e}"),
        Ok(_) => println!("qubit resume unexpectedly accepted"),
    }
    Ok(())
}
