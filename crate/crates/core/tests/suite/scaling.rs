//! Power laws the turbulence closed forms must obey exactly.

use crate::common::{assert_rel, draws};
use qkdlink::config::NamedScenario;
use qkdlink::turbulence::{
    beam_wander_variance, fried_parameter, loss_db, rytov_variance, BeamWanderInputs, HufnagelValley, Wave,
};

pub fn rytov_scales_with_path_to_eleven_sixths() {
    for (cn2, lam, l, f) in draws((1e-18f64..1e-14, 500.0f64..1600.0, 1e3f64..1e6, 1.01f64..20.0), 100) {
        let k = 2.0 * std::f64::consts::PI / (lam * 1e-9);
        for wave in [Wave::Plane, Wave::Spherical] {
            let ratio = rytov_variance(cn2, k, f * l, wave) / rytov_variance(cn2, k, l, wave);
            assert_rel(ratio, f.powf(11.0 / 6.0), 1e-9, "rytov scaling");
        }
    }
}

pub fn fried_scales_with_secant_to_minus_three_fifths() {
    let s = NamedScenario::DownlinkNight.scenario();
    let hv = HufnagelValley::from_scenario(&s);
    for (z1, z2, lam) in draws((0.0f64..85.0, 0.0f64..85.0, 500.0f64..1600.0), 100) {
        let k = 2.0 * std::f64::consts::PI / (lam * 1e-9);
        let (a, b) = (z1.to_radians(), z2.to_radians());
        let r1 = fried_parameter(&hv, a, k, 0.0, 500e3).unwrap();
        let r2 = fried_parameter(&hv, b, k, 0.0, 500e3).unwrap();
        assert_rel(r2 / r1, (a.cos() / b.cos()).powf(-0.6), 1e-9, "fried scaling");
    }
}

pub fn beam_wander_scales_with_secant_squared() {
    for (z1, z2, w0, r0) in draws((0.0f64..85.0, 0.0f64..85.0, 0.01f64..0.3, 0.01f64..0.5), 100) {
        let at = |z: f64| BeamWanderInputs {
            satellite_altitude_m: 500e3,
            ground_altitude_m: 0.0,
            zenith_rad: z.to_radians(),
            beam_radius_m: w0,
            fried_m: r0,
            scaling: 2.0 * std::f64::consts::PI,
            receiver_beam_radius_m: 1.0,
            slant_distance_m: 500e3 / z.to_radians().cos(),
        };
        let ratio = beam_wander_variance(&at(z2), 800e-9) / beam_wander_variance(&at(z1), 800e-9);
        let sec = z1.to_radians().cos() / z2.to_radians().cos();
        assert_rel(ratio, sec * sec, 1e-9, "beam wander scaling");
    }
}

pub fn loss_scales_with_variance_to_two_fifths() {
    for (s2, f, p) in draws((1e-8f64..10.0, 1.01f64..100.0, 1e-9f64..0.5), 100) {
        let ratio = loss_db(f * s2, p).unwrap() / loss_db(s2, p).unwrap();
        assert_rel(ratio, f.powf(0.4), 1e-9, "loss scaling");
    }
}

#[allow(dead_code)]
pub const CHECKS: &[(&str, fn())] = &[
    ("rytov_scales_with_path_to_eleven_sixths", rytov_scales_with_path_to_eleven_sixths),
    ("fried_scales_with_secant_to_minus_three_fifths", fried_scales_with_secant_to_minus_three_fifths),
    ("beam_wander_scales_with_secant_squared", beam_wander_scales_with_secant_squared),
    ("loss_scales_with_variance_to_two_fifths", loss_scales_with_variance_to_two_fifths),
];
