//! Built-in rules of degree 1..=11.
//!
//! Orbit parameters and weights are stored to double precision; they pass
//! degree verification at double-mode tolerances as-is, and serve as seeds
//! for extended-precision refinement. The low degrees (1–3) are the exact
//! analytic solutions of their moment systems; the rest descend from the
//! published symmetric Gauss point tables for triangles.

use super::{Orbit, QuadratureRule, RuleError};
use crate::scalar::Real;

enum SeedOrbit {
    C(f64),
    T1(f64, f64),
    T2(f64, f64, f64),
}

const DEGREE_COUNT: usize = 11;

const CATALOG: [&[SeedOrbit]; DEGREE_COUNT] = [
    // degree 1
    &[SeedOrbit::C(1.0)],
    // degree 2
    &[SeedOrbit::T1(0.6666666666666666, 0.3333333333333333)],
    // degree 3
    &[
        SeedOrbit::C(-0.5625),
        SeedOrbit::T1(0.6, 0.5208333333333334),
    ],
    // degree 4
    &[
        SeedOrbit::T1(0.10810301816807023, 0.22338158967801147),
        SeedOrbit::T1(0.8168475729804585, 0.10995174365532187),
    ],
    // degree 5
    &[
        SeedOrbit::C(0.225),
        SeedOrbit::T1(0.05971587178976982, 0.1323941527885062),
        SeedOrbit::T1(0.7974269853530873, 0.12593918054482714),
    ],
    // degree 6
    &[
        SeedOrbit::T1(0.5014265096581791, 0.11678627572637937),
        SeedOrbit::T1(0.8738219710169955, 0.05084490637020682),
        SeedOrbit::T2(0.053145049844816945, 0.3103524510337844, 0.08285107561837357),
    ],
    // degree 7
    &[
        SeedOrbit::C(-0.14957004446768174),
        SeedOrbit::T1(0.47930806784192037, 0.1756152574332078),
        SeedOrbit::T1(0.8697397941955683, 0.05334723560883849),
        SeedOrbit::T2(0.04869031542531641, 0.31286549600487384, 0.07711376089025714),
    ],
    // degree 8
    &[
        SeedOrbit::C(0.14431560767778717),
        SeedOrbit::T1(0.0814148234145537, 0.09509163426728462),
        SeedOrbit::T1(0.6588613844964796, 0.10321737053471824),
        SeedOrbit::T1(0.8989055433659381, 0.03245849762319808),
        SeedOrbit::T2(0.008394777409957605, 0.2631128296346381, 0.027230314174434993),
    ],
    // degree 9
    &[
        SeedOrbit::C(0.09713579628279884),
        SeedOrbit::T1(0.020634961602524746, 0.03133470022713907),
        SeedOrbit::T1(0.12582081701412673, 0.07782754100477428),
        SeedOrbit::T1(0.6235929287619345, 0.07964773892721025),
        SeedOrbit::T1(0.9105409732110946, 0.02557767565869803),
        SeedOrbit::T2(0.036838412054736286, 0.2219629891607657, 0.043283539377289376),
    ],
    // degree 10
    &[
        SeedOrbit::C(0.09081799038275358),
        SeedOrbit::T1(0.028844733232685247, 0.036725957756466705),
        SeedOrbit::T1(0.7810368490299259, 0.04532105943552794),
        SeedOrbit::T2(0.14170721941487996, 0.30793983876412095, 0.07275791684542011),
        SeedOrbit::T2(0.025003534762686387, 0.2466725606399027, 0.028327242531057485),
        SeedOrbit::T2(0.009540815400299458, 0.06680325101220026, 0.009421666963732823),
    ],
    // degree 11
    &[
        SeedOrbit::T1(-0.06922209654151662, 0.000927006328960676),
        SeedOrbit::T1(0.20206139406828955, 0.07714953491481312),
        SeedOrbit::T1(0.593380199137435, 0.05932297738077407),
        SeedOrbit::T1(0.7612981754348374, 0.03618454050341808),
        SeedOrbit::T1(0.9352701037774482, 0.013659731002677863),
        SeedOrbit::T2(0.05017813831049466, 0.3566206482612926, 0.05233711196220407),
        SeedOrbit::T2(0.021022016536166296, 0.17148898030404156, 0.020707659639140688),
    ],
];

/// Loads the built-in rule of exactness degree `d` (1..=11).
///
/// Double values lift exactly into either precision mode.
pub fn load_builtin_rule<R: Real>(d: u32) -> Result<QuadratureRule<R>, RuleError> {
    if !(1..=DEGREE_COUNT as u32).contains(&d) {
        return Err(RuleError::UnsupportedDegree { degree: d });
    }
    let orbits = CATALOG[(d - 1) as usize]
        .iter()
        .map(|seed| match *seed {
            SeedOrbit::C(w) => Orbit::Type0 {
                weight: R::from_f64(w),
            },
            SeedOrbit::T1(l1, w) => Orbit::Type1 {
                lambda1: R::from_f64(l1),
                weight: R::from_f64(w),
            },
            SeedOrbit::T2(l1, l2, w) => Orbit::Type2 {
                lambda1: R::from_f64(l1),
                lambda2: R::from_f64(l2),
                weight: R::from_f64(w),
            },
        })
        .collect();
    Ok(QuadratureRule { degree: d, orbits })
}
