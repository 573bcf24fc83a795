//! Secrecy outage against the target secrecy rate: a steeper requirement
//! costs outage, more devices buy it back.

use ambsec::analytic::{sop_exact, EvalRoute, SopSettings};
use ambsec::sysmodel::{derive, SystemConfig};

fn main() {
    let settings = SopSettings::default();
    println!("{:>6} {:>12} {:>12} {:>12}", "R_s", "K=0", "K=10", "K=40");
    for rs in [0.5, 1.0, 1.5, 2.0, 2.5, 3.0] {
        let mut row = format!("{rs:>6.1}");
        for k in [0usize, 10, 40] {
            let cfg = SystemConfig { num_bds: k, secrecy_rate: rs, ..Default::default() }
                .with_legit_snr_db(20.0);
            let dp = derive(&cfg).expect("derive");
            let r = sop_exact(&dp, EvalRoute::FoxhClosedForm, &settings).expect("sop");
            row.push_str(&format!(" {:>12.4e}", r.sop));
        }
        println!("{row}");
    }
}
