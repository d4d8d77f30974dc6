//! Fits applied to radial profiles: the fixed beta tail for rebits and the
//! power relation between rebit and qubit profiles.

use sepscope::analytic::{fit_beta_tail, fit_power, power_compare};
use sepscope::profile::radial_profile;
use sepscope::sampling::{SamplerConfig, SamplerKind};
use sepscope::Field;

fn main() -> sepscope::Result<()> {
    let rebit = radial_profile(&SamplerConfig::new(Field::Rebit, SamplerKind::MonteCarlo, 42, 20_000).with_workers(4), 101)?;
    let qubit = radial_profile(&SamplerConfig::new(Field::Qubit, SamplerKind::QuasiMonteCarlo, 42, 20_000).with_workers(4), 101)?;

    let beta = fit_beta_tail(&rebit)?;
    println!("rebit vs 1 - I_r(3, 1/4): F(0) = {:.3}, rms {:.4}", beta.params[0], beta.rms_residual);
    for alpha in [1.5, 2.0] {
        println!("qubit vs rebit^{alpha}: rms {:.4}", power_compare(&rebit, &qubit, alpha)?);
    }
    let fit = fit_power(&rebit, &qubit, 1.5)?;
    println!("{}", serde_json::to_string(&fit)?);
    Ok(())
}
