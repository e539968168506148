use num_complex::Complex64;
use rgsw::model::PhysParams;
use rgsw::profiles::{construct_single_jump, mollify, SingleJumpSpec};
use rgsw::spectral::evans;

fn params() -> PhysParams {
    PhysParams::new(9.510565162951535, 3.090169943749474, 1.0, 0.9).unwrap()
}

fn jump(n: usize) -> rgsw::WaveProfile {
    construct_single_jump(
        &SingleJumpSpec {
            h0: 1.0,
            phi_left: 0.2,
            phi_right: 0.5,
            x_jump: 125.0,
            domain: (0.0, 250.0),
            n_samples: n,
        },
        &params(),
    )
    .unwrap()
}

#[test]
fn probe_reference_and_ladder() {
    for lambda in [
        Complex64::new(0.3, -8.0),
        Complex64::new(0.8, 0.5),
        Complex64::new(2.5, 3.0),
    ] {
        println!("lambda {lambda}");
        for n in [2001usize, 4001, 8001, 16001, 32001] {
            let d = evans(&jump(n), lambda, None).unwrap();
            println!("  disc n {n:6}: {d:?}  |d| {:.6e}", d.norm());
        }
        let fine = jump(32001);
        for eps in [3.2, 1.6, 0.8, 0.4, 0.2, 0.1] {
            let d = evans(&mollify(&fine, eps).unwrap(), lambda, None).unwrap();
            println!("  eps {eps:4}: {d:?}  |d| {:.6e}", d.norm());
        }
    }
}
