//! Quad-double constants for argument reduction and Taylor kernels.
//!
//! Each constant is stored as four non-overlapping doubles whose sum is the
//! nearest quad-double to the mathematical value; components were computed
//! with 90-digit arithmetic and are embedded as exact bit patterns.

use super::qd::Qd;

/// 2*pi
pub const TWO_PI: Qd = Qd([
    f64::from_bits(0x401921fb54442d18), // 6.283185307179586
    f64::from_bits(0x3cb1a62633145c07), // 2.4492935982947064e-16
    f64::from_bits(0xb93f1976b7ed8fbc), // -5.989539619436679e-33
    f64::from_bits(0x35d4cf98e804177d), // 2.2249084417267306e-49
]); // residual 1.81e-66

/// pi/2
pub const PI_HALF: Qd = Qd([
    f64::from_bits(0x3ff921fb54442d18), // 1.5707963267948966
    f64::from_bits(0x3c91a62633145c07), // 6.123233995736766e-17
    f64::from_bits(0xb91f1976b7ed8fbc), // -1.4973849048591698e-33
    f64::from_bits(0x35b4cf98e804177d), // 5.562271104316826e-50
]); // residual 1.81e-66

/// pi/16
pub const PI_SIXTEENTH: Qd = Qd([
    f64::from_bits(0x3fc921fb54442d18), // 0.19634954084936207
    f64::from_bits(0x3c61a62633145c07), // 7.654042494670958e-18
    f64::from_bits(0xb8ef1976b7ed8fbc), // -1.8717311310739623e-34
    f64::from_bits(0x3584cf98e804177d), // 6.952838880396033e-51
]); // residual 1.81e-66

/// ln(2)
pub const LN_2: Qd = Qd([
    f64::from_bits(0x3fe62e42fefa39ef), // 0.6931471805599453
    f64::from_bits(0x3c7abc9e3b39803f), // 2.3190468138462996e-17
    f64::from_bits(0x3907b57a079a1934), // 5.707708438416212e-34
    f64::from_bits(0xb5aace93a4ebe5d1), // -3.5824322106018114e-50
]); // residual 1.95e-66

/// sin(k*pi/16) for k = 1..4
pub const SIN_TABLE: [Qd; 4] = [
    Qd([f64::from_bits(0x3fc8f8b83c69a60b), f64::from_bits(0xbc626d19b9ff8d82), f64::from_bits(0x3909b09f9ca72c69), f64::from_bits(0xb5aad1a1c58d78f1)]),
    Qd([f64::from_bits(0x3fd87de2a6aea963), f64::from_bits(0xbc672cedd3d5a610), f64::from_bits(0xb8f11e4420e0a4b5), f64::from_bits(0xb5930876cf170faa)]),
    Qd([f64::from_bits(0x3fe1c73b39ae68c8), f64::from_bits(0x3c8b25dd267f6600), f64::from_bits(0xb9256f3106b0516d), f64::from_bits(0x35c6fdd19f654cb0)]),
    Qd([f64::from_bits(0x3fe6a09e667f3bcd), f64::from_bits(0xbc8bdd3413b26456), f64::from_bits(0x39257d3e3adec175), f64::from_bits(0x35a2775099da2f59)]),
];

/// cos(k*pi/16) for k = 1..4
pub const COS_TABLE: [Qd; 4] = [
    Qd([f64::from_bits(0x3fef6297cff75cb0), f64::from_bits(0x3c7562172a361fd3), f64::from_bits(0xb9163744e82fc701), f64::from_bits(0x35b8f18ae1b19973)]),
    Qd([f64::from_bits(0x3fed906bcf328d46), f64::from_bits(0x3c7457e610231ac2), f64::from_bits(0xb904f3f87abe1619), f64::from_bits(0xb5ae4a2c9448ed08)]),
    Qd([f64::from_bits(0x3fea9b66290ea1a3), f64::from_bits(0x3c39f630e8b6dac8), f64::from_bits(0x38cf345a348e97cd), f64::from_bits(0xb533615553f71a76)]),
    Qd([f64::from_bits(0x3fe6a09e667f3bcd), f64::from_bits(0xbc8bdd3413b26456), f64::from_bits(0x39257d3e3adec175), f64::from_bits(0x35a2775099da2f59)]),
];

/// 1/k! for k = 3..=35, Taylor coefficients for the exp/sin/cos kernels
pub const INV_FACT: [Qd; 33] = [
    Qd([f64::from_bits(0x3fc5555555555555), f64::from_bits(0x3c65555555555555), f64::from_bits(0x3905555555555555), f64::from_bits(0x35a5555555555555)]), // 1/3!
    Qd([f64::from_bits(0x3fa5555555555555), f64::from_bits(0x3c45555555555555), f64::from_bits(0x38e5555555555555), f64::from_bits(0x3585555555555555)]), // 1/4!
    Qd([f64::from_bits(0x3f81111111111111), f64::from_bits(0x3c01111111111111), f64::from_bits(0x3881111111111111), f64::from_bits(0x3501111111111111)]), // 1/5!
    Qd([f64::from_bits(0x3f56c16c16c16c17), f64::from_bits(0xbbef49f49f49f49f), f64::from_bits(0xb8827d27d27d27d2), f64::from_bits(0xb52f49f49f49f49f)]), // 1/6!
    Qd([f64::from_bits(0x3f2a01a01a01a01a), f64::from_bits(0x3b6a01a01a01a01a), f64::from_bits(0x37aa01a01a01a01a), f64::from_bits(0x33ea01a01a01a01a)]), // 1/7!
    Qd([f64::from_bits(0x3efa01a01a01a01a), f64::from_bits(0x3b3a01a01a01a01a), f64::from_bits(0x377a01a01a01a01a), f64::from_bits(0x33ba01a01a01a01a)]), // 1/8!
    Qd([f64::from_bits(0x3ec71de3a556c734), f64::from_bits(0xbb6c154f8ddc6c00), f64::from_bits(0x38071de3a556c734), f64::from_bits(0xb4ac154f8ddc6c00)]), // 1/9!
    Qd([f64::from_bits(0x3e927e4fb7789f5c), f64::from_bits(0x3b3cbbc05b4fa99a), f64::from_bits(0xb7bc6d278883e8f5), f64::from_bits(0x34595567d3a50cce)]), // 1/10!
    Qd([f64::from_bits(0x3e5ae64567f544e4), f64::from_bits(0xbafc062e06d1f209), f64::from_bits(0x377c7880adcbc46e), f64::from_bits(0xb415553a6f0fed60)]), // 1/11!
    Qd([f64::from_bits(0x3e21eed8eff8d898), f64::from_bits(0xbac2aec959e14c06), f64::from_bits(0x3742fb0073dd2d9e), f64::from_bits(0x33ec71d90b4ab715)]), // 1/12!
    Qd([f64::from_bits(0x3de6124613a86d09), f64::from_bits(0x3a8f28e0cc748ebe), f64::from_bits(0xb727b2c4c8a840bc), f64::from_bits(0x33cc71cca1034c07)]), // 1/13!
    Qd([f64::from_bits(0x3da93974a8c07c9d), f64::from_bits(0x3a305d6f8a2efd1f), f64::from_bits(0x36c3aa3346236a5d), f64::from_bits(0x336d75f096ea801e)]), // 1/14!
    Qd([f64::from_bits(0x3d6ae7f3e733b81f), f64::from_bits(0x39e1d8656b0ee8cb), f64::from_bits(0xb626e142a138f825), f64::from_bits(0x32b43c0c38ccdcc6)]), // 1/15!
    Qd([f64::from_bits(0x3d2ae7f3e733b81f), f64::from_bits(0x39a1d8656b0ee8cb), f64::from_bits(0xb5e6e142a138f825), f64::from_bits(0x32743c0c38ccdcc6)]), // 1/16!
    Qd([f64::from_bits(0x3ce952c77030ad4a), f64::from_bits(0x398ac981465ddc6c), f64::from_bits(0xb5a588b72e53bc5f), f64::from_bits(0x3227079e8909271a)]), // 1/17!
    Qd([f64::from_bits(0x3ca6827863b97d97), f64::from_bits(0x394eec01221a8b0b), f64::from_bits(0xb5e568798662118b), f64::from_bits(0x321f00d8b9e49291)]), // 1/18!
    Qd([f64::from_bits(0x3c62f49b46814157), f64::from_bits(0x38f2650f61dbdcb4), f64::from_bits(0xb5969502917cbf3b), f64::from_bits(0x320e35fbddac4553)]), // 1/19!
    Qd([f64::from_bits(0x3c1e542ba4020225), f64::from_bits(0x387ea72b4afe3c2f), f64::from_bits(0xb5144020dfd65c8c), f64::from_bits(0xb186e69b50fc88ab)]), // 1/20!
    Qd([f64::from_bits(0x3bd71b8ef6dcf572), f64::from_bits(0xb87d043ae40c4647), f64::from_bits(0x34f486121e81d5fe), f64::from_bits(0xb192d4ba8e1e64c7)]), // 1/21!
    Qd([f64::from_bits(0x3b90ce396db7f853), f64::from_bits(0xb83aebcdbd20331c), f64::from_bits(0xb4d38a88578b4d75), f64::from_bits(0x316c0fbc29694fb8)]), // 1/22!
    Qd([f64::from_bits(0x3b4761b41316381a), f64::from_bits(0xb7d3423c7d91404f), f64::from_bits(0x346e6135bfc1194a), f64::from_bits(0xb10ba7b1a3077b39)]), // 1/23!
    Qd([f64::from_bits(0x3aff2cf01972f578), f64::from_bits(0xb789ada5fcc1ab14), f64::from_bits(0x342440ce7fd610dc), f64::from_bits(0xb0c26fcbc204fcd1)]), // 1/24!
    Qd([f64::from_bits(0x3ab3f3ccdd165fa9), f64::from_bits(0xb7458ddadf344487), f64::from_bits(0xb3ee8ed8001ad67e), f64::from_bits(0x30880a5edffcced7)]), // 1/25!
    Qd([f64::from_bits(0x3a688e85fc6a4e5a), f64::from_bits(0xb7071c37ebd16540), f64::from_bits(0x33a494676265a364), f64::from_bits(0xb02397b40007db79)]), // 1/26!
    Qd([f64::from_bits(0x3a1d1ab1c2dccea3), f64::from_bits(0x36a054d0c78aea14), f64::from_bits(0xb34196bf16c33a56), f64::from_bits(0x2fef0e65ed04d346)]), // 1/27!
    Qd([f64::from_bits(0x39d0a18a2635085d), f64::from_bits(0x366b9e2e28e1aa54), f64::from_bits(0x330a8549a9d99586), f64::from_bits(0xaf5141dcc8cc5668)]), // 1/28!
    Qd([f64::from_bits(0x398259f98b4358ad), f64::from_bits(0x362eaf8c39dd9bc5), f64::from_bits(0xb2c6e29990a26fb6), f64::from_bits(0xaf42d867809b5568)]), // 1/29!
    Qd([f64::from_bits(0x3933932c5047d60e), f64::from_bits(0x35d832b7b530a627), f64::from_bits(0x3255d2c61f6d124c), f64::from_bits(0x2eff192b328d82c4)]), // 1/30!
    Qd([f64::from_bits(0x38e434d2e783f5bc), f64::from_bits(0x3580b87b91be9aff), f64::from_bits(0x31fc89db1796db75), f64::from_bits(0xae98923b7699c8be)]), // 1/31!
    Qd([f64::from_bits(0x389434d2e783f5bc), f64::from_bits(0x3530b87b91be9aff), f64::from_bits(0x31ac89db1796db75), f64::from_bits(0xae48923b7699c8be)]), // 1/32!
    Qd([f64::from_bits(0x3843981254dd0d52), f64::from_bits(0xb4e2b1f4c8015a2f), f64::from_bits(0xb18d82af23edb6db), f64::from_bits(0x2e2a1cd20123a99b)]), // 1/33!
    Qd([f64::from_bits(0x37f2710231c0fd7a), f64::from_bits(0x3473f8a2b4af9d6b), f64::from_bits(0x311c32215a9f317e), f64::from_bits(0xadad451e158a1205)]), // 1/34!
    Qd([f64::from_bits(0x37a0dc59c716d91f), f64::from_bits(0x343419e3fad3f031), f64::from_bits(0x30bd9d7ed1981ffc), f64::from_bits(0xad3345ea5d66a84b)]), // 1/35!
];
