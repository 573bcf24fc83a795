//! Robustness to synchronization and channel-estimation error. These are
//! simulation-only models (the receiver-side impairment mechanics are our
//! constructions), so the sweeps run the Monte Carlo route alone.

use ambsec::montecarlo::{empirical_sop, sample_batch};
use ambsec::sysmodel::SystemConfig;

fn main() {
    let n = 300_000;
    let seed = 24;

    println!("timing error sweep at 20 dB (SOP, by device count):");
    println!("{:>6} {:>12} {:>12}", "T_s", "K=10", "K=40");
    for ts in [0.0, 0.1, 0.2, 0.3] {
        let mut row = format!("{ts:>6.2}");
        for k in [10usize, 40] {
            let cfg = SystemConfig { num_bds: k, timing_error: ts, ..Default::default() }
                .with_legit_snr_db(20.0);
            let batch = sample_batch(&cfg, n, seed).expect("simulation");
            let (p, se) = empirical_sop(&batch, cfg.secrecy_rate).expect("estimate");
            row.push_str(&format!(" {p:>9.3e}±{se:.0e}"));
        }
        println!("{row}");
    }

    println!("\nchannel-estimation error sweep at 20 dB:");
    println!("{:>6} {:>12} {:>12}", "eps", "K=10", "K=40");
    for eps in [0.0, 0.1, 0.2, 0.4] {
        let mut row = format!("{eps:>6.2}");
        for k in [10usize, 40] {
            let cfg = SystemConfig { num_bds: k, csi_error: eps, ..Default::default() }
                .with_legit_snr_db(20.0);
            let batch = sample_batch(&cfg, n, seed).expect("simulation");
            let (p, se) = empirical_sop(&batch, cfg.secrecy_rate).expect("estimate");
            row.push_str(&format!(" {p:>9.3e}±{se:.0e}"));
        }
        println!("{row}");
    }
}
