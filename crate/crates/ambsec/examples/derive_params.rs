//! Build a system configuration, inspect the derived large-scale
//! quantities, and see how the SNR knob maps to transmit power.

use ambsec::sysmodel::{derive, PerDevice, SystemConfig};

fn main() {
    let cfg = SystemConfig {
        num_bds: 4,
        // Devices need not be identical: per-device placement is allowed.
        dist_k_r: PerDevice::List(vec![0.2, 0.4, 0.6, 0.8]),
        ..Default::default()
    };
    let dp = derive(&cfg).expect("valid config");

    println!("transmit power      : {:.3} W", dp.p_lin);
    println!("direct link gain    : {:.4e}", dp.omega_tr);
    println!("legitimate SNR      : {:.1} dB", 10.0 * dp.legit_snr().log10());
    println!("rate threshold      : theta = {}, c = {}, d = {}", dp.theta, dp.c, dp.d_ratio);
    for (i, beta) in dp.beta.iter().enumerate() {
        println!("device {i}: cascade gain beta = {beta:.4e}, eve-side scale A = {:.4e}", dp.cap_a[i]);
    }

    // Retarget the direct-link SNR; only the power moves.
    let cfg20 = cfg.with_legit_snr_db(20.0);
    println!(
        "for a 20 dB direct link: transmit power {:.2} dBm",
        cfg20.transmit_power_dbm
    );

    println!("\nfull derived set as JSON:");
    println!("{}", serde_json::to_string_pretty(&dp).unwrap());
}
