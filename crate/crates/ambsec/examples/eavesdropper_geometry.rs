//! How eavesdropper-side geometry shapes secrecy: the wiretap SNR knob and
//! the device–receiver distance, swept with the exact route.

use ambsec::analytic::{sop_exact, EvalRoute, SopSettings};
use ambsec::sweep::{apply_variable, SweepVariable};
use ambsec::sysmodel::{derive, SystemConfig};

fn main() {
    let base = SystemConfig::default().with_legit_snr_db(20.0);
    let settings = SopSettings::default();

    println!("wiretap direct SNR sweep (K = {}):", base.num_bds);
    for ge_db in [-10.0, 0.0, 10.0] {
        let cfg = apply_variable(&base, SweepVariable::GammaEBarDb, ge_db).expect("knob");
        let dp = derive(&cfg).expect("derive");
        let r = sop_exact(&dp, EvalRoute::FoxhClosedForm, &settings).expect("sop");
        println!("  eve snr {ge_db:>6.1} dB -> sop {:.4e}  [{}]", r.sop, r.route);
    }

    println!("device-to-receiver distance sweep:");
    for d in [0.1, 0.5, 1.0] {
        let cfg = apply_variable(&base, SweepVariable::DKr, d).expect("knob");
        let dp = derive(&cfg).expect("derive");
        let r = sop_exact(&dp, EvalRoute::FoxhClosedForm, &settings).expect("sop");
        println!("  d_kr {d:>4.1} m -> sop {:.4e}", r.sop);
    }
}
