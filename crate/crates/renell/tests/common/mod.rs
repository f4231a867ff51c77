#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use renell::FunctionId;

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Relative distance with a unit floor, matching the crate's identity scale.
pub fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

pub fn assert_close(label: &str, got: Complex64, want: Complex64, tol: f64) {
    let r = rel(got, want);
    assert!(
        r <= tol,
        "{label}: got {got}, want {want}, rel {r:.3e} > {tol:.1e}"
    );
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

pub const ALL_JACOBI: [FunctionId; 6] = [
    FunctionId::Dn,
    FunctionId::Sn,
    FunctionId::Cn,
    FunctionId::Nd,
    FunctionId::Cd,
    FunctionId::Sd,
];

/// High-precision reference values for one lattice frame, frozen from an
/// independent multi-precision computation of the defining series.
pub struct LatticeOracle {
    pub tau: Complex64,
    pub nu0: Complex64,
    pub nu2: Complex64,
    pub nu4: Complex64,
    pub a: Complex64,
    pub b: Complex64,
    pub delta_tilde: Complex64,
    pub inv_c: Complex64,
    pub eta: Complex64,
    pub delta: Complex64,
    pub eta_quotient: Complex64,
    pub wpt_half: Complex64,
    pub wpt_tauhalf: Complex64,
    /// wpt on the tau+1 frame at its own half-sum point (tau+1)/2.
    pub wpt_mixed: Complex64,
    /// wpt at the probe point 0.2 + 0.1 tau.
    pub wpt_probe: Complex64,
    /// wpt' at the same probe point.
    pub wpt_prime_probe: Complex64,
    /// DN, SN, CN, ND, CD, SD at z = 0.13 + 0.21 tau, ordered as ALL_JACOBI.
    pub jacobi: [Complex64; 6],
}

pub fn square_oracle() -> LatticeOracle {
    LatticeOracle {
        tau: c64(0.0, 1.0),
        nu0: c64(0.0, 0.0),
        nu2: c64(9.453636006461692614653070, 0.0),
        nu4: c64(0.0, 0.0),
        a: c64(0.0, 0.0),
        b: c64(-189.0727201292338522930614, 0.0),
        delta_tilde: c64(3025.163522067741636688982, 0.0),
        inv_c: c64(-47.26818003230846307326535, 0.0),
        eta: c64(0.7682254223260566590025942, 0.0),
        delta: c64(0.001785369850642151904343055, 0.0),
        eta_quotient: c64(0.04353762280267740184950770, 0.0),
        wpt_half: c64(-6.875185818020372827490096, 0.0),
        wpt_tauhalf: c64(6.875185818020372827490096, 0.0),
        wpt_mixed: c64(13.75037163604074565498019, 0.0),
        wpt_probe: c64(-1.470249014845359480481557, -1.870185636561999343895670),
        wpt_prime_probe: c64(-19.90515615941312937964700, -8.320805028328564592196461),
        jacobi: [
            c64(1.225440533987092793492764, -0.2753858203959491791705637),
            c64(0.1417595419549426007784976, 0.1487858163481457313106967),
            c64(0.2320378171087328088315422, -0.09089815374802348670406563),
            c64(0.7652635787174645845785017, 0.1719730436519645190514908),
            c64(0.2314832363805714019782081, -0.03553300146205609462965490),
            c64(0.07023080013790548899241276, 0.1171180473610025599900262),
        ],
    }
}

pub fn half_plus_i_oracle() -> LatticeOracle {
    LatticeOracle {
        tau: c64(0.5, 1.0),
        nu0: c64(3.142694059334693309741361, -3.386618325397386650635964),
        nu2: c64(3.632078833963063809707441, 0.0),
        nu4: c64(19.16658138695008255785, 0.0),
        a: c64(-37.71232871201631971689633, 40.63941990476863980763157),
        b: c64(-91.75346945533919561172941, -255.4345270190489840937012),
        delta_tilde: c64(1238.712797972492096776704, 1021.738108076195936374805),
        inv_c: c64(-22.93836736383479890293235, -63.85863175476224602342530),
        eta: c64(0.7645031667971423014085068, 0.1006487513223172665872487),
        delta: c64(-0.001952798087876120846400525, 0.0),
        eta_quotient: c64(0.0, 0.04289202215926187855220050),
        wpt_half: c64(0.0, -6.773236650794773301271929),
        wpt_tauhalf: c64(9.428082178004079929224082, -3.386618325397386650635964),
        wpt_mixed: c64(9.428082178004079929224082, 3.386618325397386650635964),
        wpt_probe: c64(1.484895836220508962847307, -3.386618325397386650635964),
        wpt_prime_probe: c64(0.0, -20.84379226582292653180526),
        jacobi: [
            c64(1.360726198671619491211561, 0.04539891635006468656370017),
            c64(0.02881256117817039581094938, 0.2381613029150733541845026),
            c64(0.2438591199769283680351809, 0.05980491511040232501072374),
            c64(0.7451130445274964532038762, -0.02485975857073160955884389),
            c64(0.1725759919892006193014336, 0.06884337475074434187081737),
            c64(0.05688135089436235424848343, 0.1681622753281864634641348),
        ],
    }
}

pub fn generic_oracle() -> LatticeOracle {
    LatticeOracle {
        tau: c64(0.3, 1.1),
        nu0: c64(1.810088222970643300444354, -1.944487878584772786424273),
        nu2: c64(6.002896055900991338595246, 1.468510370367179357932782),
        nu4: c64(11.88682324731773656694, -4.758775174804941881868),
        a: c64(-21.72105867564771960533225, 23.33385454301727343709128),
        b: c64(-126.1132859383328920932326, -113.8428780169948043121659),
        delta_tilde: c64(1945.148197169569489635790, 807.8140009561022631525314),
        inv_c: c64(-31.52832148458322302330816, -28.46071950424870107804149),
        eta: c64(0.7477521995829028217942392, 0.05813720405228364264377134),
        delta: c64(-0.0002883882696899430731092305, 0.0009613517347784492322598222),
        eta_quotient: c64(0.01843297094205055453593046, 0.02557413905914988195081130),
        wpt_half: c64(-2.910818098157030621387324, -4.038506166596111103433032),
        wpt_tauhalf: c64(8.341082767068960522720386, -1.794957469158207255839788),
        wpt_mixed: c64(11.25190086522599114410771, 2.243548697437903847593244),
        wpt_probe: c64(0.05429449112144696484203203, -2.381550534184752674383420),
        wpt_prime_probe: c64(-7.628324713661904908889063, -14.51510970462791076117302),
        jacobi: [
            c64(1.286386402127083288559038, -0.08286392182176256325433870),
            c64(0.07168186641128489979118825, 0.1920417063592765603524759),
            c64(0.2240396984063939460933649, -0.004369040031871368694815942),
            c64(0.7764295098817582005054490, 0.04411118344005108851298048),
            c64(0.1855080240216359411655163, 0.02675432797043455054357457),
            c64(0.05742615863905820405232068, 0.1362432591552697902382072),
        ],
    }
}

pub fn oracles() -> Vec<LatticeOracle> {
    vec![square_oracle(), half_plus_i_oracle(), generic_oracle()]
}

/// Shared special values on the square frame.
pub const SD_HALF_SQUARE: f64 = 0.2086567104185182965703574;
pub const DN_HALF_SQUARE: f64 = 0.8346268416740731862814297;
pub const SD_HALF_PLUS_03I_SQUARE: f64 = 0.4009003431942795940615388;
pub const MINUS_INV_4PI: f64 = -0.07957747154594766788444188;
