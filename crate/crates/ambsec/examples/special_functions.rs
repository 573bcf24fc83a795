//! The numerical toolbox underneath the closed forms: Fox-H evaluation by
//! contour quadrature, the Lauricella F_D Euler integral, and the adaptive
//! quadrature engine with honest error estimates.

use ambsec::foxh::{foxh_eval, lauricella_fd, ContourSpec, FoxHSpec};
use ambsec::specfun::{integrate, Domain, QuadratureSpec};

fn main() {
    // H^{1,0}_{0,1}[z | —; (0,1)] = e^{−z}: the simplest Mellin pair.
    let spec = FoxHSpec {
        m: 1,
        n: 0,
        p: 0,
        q: 1,
        upper_params: vec![],
        lower_params: vec![(0.0, 1.0)],
        argument: 1.3,
    };
    let v = foxh_eval(&spec, &ContourSpec::default()).expect("contour");
    println!(
        "H[1.3] = {:.12}  (e^-1.3 = {:.12}, reported err {:.1e})",
        v.value,
        (-1.3f64).exp(),
        v.err_estimate
    );
    println!("contour diagnostics: {:?}", v.diagnostics);

    // Lauricella F_D via its Euler integral, valid far outside the series
    // region: F_D(1;1;2;x) = −ln(1−x)/x.
    for x in [-0.5, -20.0] {
        let fd = lauricella_fd(1.0, &[1.0], 2.0, &[x]).expect("euler integral");
        let exact = -(1.0 - x).ln() / x;
        println!("F_D(1;1;2;{x}) = {fd:.12} (closed form {exact:.12})");
    }

    // Quadrature with an error estimate that actually covers the error.
    let q = QuadratureSpec::default();
    let r = integrate(|t: f64| (-t).exp() * t.cos(), Domain::SemiInfinite(0.0), &q).expect("quad");
    println!(
        "∫ e^-t cos t dt = {:.12} (exact 0.5), err estimate {:.1e}",
        r.value, r.err_estimate
    );
}
