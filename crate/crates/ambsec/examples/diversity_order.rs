//! High-SNR behavior: the asymptote closes on the exact curve and the
//! fitted secrecy diversity order comes out at one.

use ambsec::analytic::{
    sdo_estimate, sop_asymptotic, sop_contour, EvalRoute, SopSettings,
};
use ambsec::sysmodel::{derive, SystemConfig};

fn main() {
    let settings = SopSettings::default();
    let dp = derive(&SystemConfig::default()).expect("derive");

    println!("{:>8} {:>14} {:>14} {:>8}", "P (dBm)", "exact", "asymptote", "ratio");
    for p_dbm in [20.0, 30.0, 40.0, 50.0, 60.0] {
        let at = dp.with_power_dbm(p_dbm);
        let exact = sop_contour(&at, &settings).expect("contour").sop;
        let asy = sop_asymptotic(&at).expect("asymptote").sop;
        println!("{p_dbm:>8.0} {exact:>14.5e} {asy:>14.5e} {:>8.4}", exact / asy);
    }

    let grid: Vec<f64> = (0..=15).map(|i| 40.0 + 2.0 * i as f64).collect();
    let s_asy = sdo_estimate(&dp, &grid, EvalRoute::Asymptotic, &settings).expect("slope");
    let s_exact = sdo_estimate(&dp, &grid, EvalRoute::FoxhClosedForm, &settings).expect("slope");
    println!("\ndiversity order (top decade fit): asymptotic {s_asy:.4}, exact {s_exact:.4}");
}
