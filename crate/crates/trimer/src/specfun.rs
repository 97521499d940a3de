//! Self-contained special functions: the principal branch of the Lambert W
//! function, the Airy function `Ai` with its derivative, and the interlaced
//! negative constants `sigma_k` (extrema of `Ai` for even `k`, zeros for odd
//! `k`) that control the `eps^(2/3)` eigenvalue expansion.
//!
//! Everything here is plain `f64` arithmetic with no external dependencies.
//! `Ai` is evaluated by a three-regime split: Maclaurin series on
//! `[-7, 5.5]`, the exponential asymptotic expansion above, and the
//! trigonometric asymptotic expansion below. The crossover points and term
//! caps are fixed constants; the overlap tests in this module pin the two
//! regimes against each other on both crossover bands.

use crate::{Error, Result};

/// `Ai(0) = 3^(-2/3) / Gamma(2/3)`.
const AI_ZERO: f64 = 0.355_028_053_887_817_24;
/// `-Ai'(0) = 3^(-1/3) / Gamma(1/3)`.
const AIP_ZERO: f64 = 0.258_819_403_792_806_8;

/// Upper end of the Maclaurin regime. Above this the two series terms grow
/// like `exp((2/3) x^(3/2))` while `Ai` decays, and the cancellation would
/// eat the 1e-11 absolute accuracy budget before reaching 7.
const SERIES_MAX: f64 = 5.5;
/// Lower end of the Maclaurin regime.
const SERIES_MIN: f64 = -7.0;

const MAX_SIGMA_INDEX: usize = 50;

/// Classification of a `sigma_k` constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum SigmaKind {
    /// Even index: `Ai'(sigma_k) = 0`.
    Extremum,
    /// Odd index: `Ai(sigma_k) = 0`.
    Zero,
}

/// The `k`-th interlaced Airy constant: extrema and zeros of `Ai` on the
/// negative axis, ordered `sigma_(k+1) < sigma_k < 0`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct AirySigma {
    pub index: usize,
    pub value: f64,
    pub kind: SigmaKind,
}

/// Principal branch of the Lambert W function, the solution of
/// `w exp(w) = u` with `w >= -1`.
///
/// Defined for `u >= -1/e`; arguments up to `1e-15` below the branch point
/// are clamped onto it. The residual `|w exp(w) - u|` stays below
/// `1e-13 * max(1, |u|)`.
pub fn lambert_w0(u: f64) -> Result<f64> {
    const BRANCH: f64 = -0.367_879_441_171_442_33; // -1/e
    if !u.is_finite() {
        return Err(Error::domain("lambert_w0", format!("non-finite argument {u}")));
    }
    if u < BRANCH - 1e-15 {
        return Err(Error::domain(
            "lambert_w0",
            format!("argument {u} below the branch point -1/e"),
        ));
    }
    let u = u.max(BRANCH);
    if u == 0.0 {
        return Ok(0.0);
    }

    // Distance from the branch point; the expansion variable is
    // p = sqrt(2 (1 + e u)).
    let p2 = 2.0 * (1.0 + std::f64::consts::E * u);
    if p2 <= 0.0 {
        return Ok(-1.0);
    }
    let p = p2.sqrt();
    // Within 1e-8 of -1/e the Halley correction divides by w+1 ~ 0 and the
    // series is already accurate to ~1e-16; return it directly.
    if p2 < 2.0 * std::f64::consts::E * 1e-8 {
        return Ok(-1.0 + p - p2 / 6.0 + 11.0 / 72.0 * p * p2);
    }

    // Initial guess: branch-point series on the left, log(1+u) improved by
    // one log iteration for large arguments.
    let mut w = if u < -0.25 {
        -1.0 + p - p2 / 6.0 + 11.0 / 72.0 * p * p2
    } else if u < 3.0 {
        u.ln_1p()
    } else {
        let l = u.ln();
        l - (l.ln()) * (1.0 - 1.0 / l)
    };

    // Halley iteration on f(w) = w e^w - u; cubic convergence, observed
    // <= 6 steps over the whole domain.
    for _ in 0..30 {
        let ew = w.exp();
        let f = w * ew - u;
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let dw = f / denom;
        w -= dw;
        if dw.abs() <= 1e-16 * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w)
}

/// Airy function of the first kind, `Ai(x)`.
///
/// Absolute accuracy is better than `1e-11` on `[-20, 10]`; for large
/// positive `x` the value follows `exp(-(2/3) x^(3/2)) / (2 sqrt(pi) x^(1/4))`.
pub fn airy_ai(x: f64) -> f64 {
    if x > SERIES_MAX {
        asym_pos(x).0
    } else if x < SERIES_MIN {
        asym_neg(x).0
    } else {
        series(x).0
    }
}

/// Derivative `Ai'(x)`, same regime split and accuracy as [`airy_ai`].
pub fn airy_ai_prime(x: f64) -> f64 {
    if x > SERIES_MAX {
        asym_pos(x).1
    } else if x < SERIES_MIN {
        asym_neg(x).1
    } else {
        series(x).1
    }
}

/// The `k`-th interlaced Airy constant (`k <= 50`).
///
/// Odd indices are bracketed by the Hethcote bounds and refined by bisection
/// plus a Newton polish on `Ai`; even indices are bracketed by the two
/// neighboring zeros and refined the same way on `Ai'`.
pub fn sigma(k: usize) -> Result<AirySigma> {
    if k > MAX_SIGMA_INDEX {
        return Err(Error::range(
            "sigma",
            format!("index {k} exceeds the supported range 0..={MAX_SIGMA_INDEX}"),
        ));
    }
    let value = if k % 2 == 1 {
        ai_zero(k)
    } else if k == 0 {
        refine_root(-1.2, -0.9, airy_ai_prime, |x| x * airy_ai(x))
    } else {
        // sigma_2n lies strictly between the zeros sigma_(2n+1) and
        // sigma_(2n-1), where Ai' takes opposite signs.
        refine_root(ai_zero(k + 1), ai_zero(k - 1), airy_ai_prime, |x| x * airy_ai(x))
    };
    let kind = if k % 2 == 0 { SigmaKind::Extremum } else { SigmaKind::Zero };
    debug_assert!(value < 0.0);
    Ok(AirySigma { index: k, value, kind })
}

/// Hethcote-style bracket `(lo, hi)` with `lo <= sigma_k <= hi`.
///
/// For odd `k = 2n+1` these are the published two-sided bounds; for even
/// `k = 2n >= 2` the upper bound comes from interlacing with the previous
/// zero and the lower bound is shared with `sigma_(2n+1)`. Returns `None`
/// for `k = 0` (not covered by the bounds).
pub fn hethcote_bracket(k: usize) -> Option<(f64, f64)> {
    let pow23 = |t: f64| t.powf(2.0 / 3.0);
    if k % 2 == 1 {
        let n = (k - 1) / 2;
        let base = 3.0 * std::f64::consts::PI / 8.0 * (4.0 * n as f64 + 3.0);
        let corr = 1.5 * (5.0 / (18.0 * std::f64::consts::PI * (4.0 * n as f64 + 3.0))).atan();
        Some((-pow23(base + corr), -pow23(base)))
    } else if k >= 2 {
        let n = k / 2;
        let base = 3.0 * std::f64::consts::PI / 8.0 * (4.0 * n as f64 + 3.0);
        let corr = 1.5 * (5.0 / (18.0 * std::f64::consts::PI * (4.0 * n as f64 + 3.0))).atan();
        let hi = -pow23(3.0 * std::f64::consts::PI / 8.0 * (4.0 * n as f64 - 1.0));
        Some((-pow23(base + corr), hi))
    } else {
        None
    }
}

/// `k`-th zero of `Ai` for odd `k`, from the Hethcote bracket.
fn ai_zero(k: usize) -> f64 {
    let (lo, hi) = hethcote_bracket(k).expect("odd index has a bracket");
    // Widen by a hair: the bounds are inclusive and the root can sit on one.
    refine_root(lo - 1e-9, hi + 1e-9, airy_ai, airy_ai_prime)
}

/// Bisection to a narrow interval followed by Newton steps, guarded to stay
/// inside the bracket.
fn refine_root(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64) -> f64 {
    let mut flo = f(lo);
    let fhi = f(hi);
    debug_assert!(
        flo * fhi <= 0.0,
        "refine_root: no sign change on [{lo}, {hi}] (f: {flo}, {fhi})"
    );
    for _ in 0..30 {
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        if flo * fmid <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..8 {
        let fx = f(x);
        let dfx = df(x);
        if dfx == 0.0 {
            break;
        }
        let step = fx / dfx;
        let next = x - step;
        x = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
        if step.abs() < 1e-15 * x.abs() {
            break;
        }
    }
    x
}

/// Maclaurin evaluation of `(Ai, Ai')`, valid on `[SERIES_MIN, SERIES_MAX]`.
///
/// `Ai = c1 f - c2 g` with `f'' = x f`, `g'' = x g`, `f(0)=1`, `g'(0)=1`.
/// The four partial sums use compensated accumulation: near the upper end
/// the terms reach ~1e4 while the result is ~1e-5, and the compensation
/// keeps the rounding loss within the absolute budget.
fn series(x: f64) -> (f64, f64) {
    let x3 = x * x * x;
    // Term values for f, g, f', g'.
    let mut tf = 1.0;
    let mut tg = x;
    let mut tfp = 0.5 * x * x;
    let mut tgp = 1.0;
    let mut f = KahanSum::new(tf);
    let mut g = KahanSum::new(tg);
    let mut fp = KahanSum::new(tfp);
    let mut gp = KahanSum::new(tgp);
    for k in 0..60 {
        let kk = 3.0 * k as f64;
        tf *= x3 / ((kk + 2.0) * (kk + 3.0));
        tg *= x3 / ((kk + 3.0) * (kk + 4.0));
        tfp *= x3 / ((kk + 3.0) * (kk + 5.0));
        tgp *= x3 / ((kk + 1.0) * (kk + 3.0));
        f.add(tf);
        g.add(tg);
        fp.add(tfp);
        gp.add(tgp);
        if tf.abs() < 1e-18 * f.value().abs().max(1.0) && tg.abs() < 1e-18 * g.value().abs().max(1.0)
        {
            break;
        }
    }
    (
        AI_ZERO * f.value() - AIP_ZERO * g.value(),
        AI_ZERO * fp.value() - AIP_ZERO * gp.value(),
    )
}

/// Exponential asymptotic expansion of `(Ai, Ai')` for large positive `x`:
///
/// ```text
/// Ai(x)  ~  exp(-z) / (2 sqrt(pi) x^(1/4)) * sum (-1)^k u_k z^-k
/// Ai'(x) ~ -exp(-z) x^(1/4) / (2 sqrt(pi)) * sum (-1)^k v_k z^-k
/// ```
///
/// with `z = (2/3) x^(3/2)`; the sums are truncated at the smallest term.
fn asym_pos(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let (su, sv) = asym_sums(zeta, false);
    let pre = (-zeta).exp() / (2.0 * std::f64::consts::PI.sqrt());
    let x4 = x.sqrt().sqrt();
    (pre / x4 * su.0, -pre * x4 * sv.0)
}

/// Trigonometric asymptotic expansion for large negative `x`:
///
/// ```text
/// Ai(-z)  ~ (cos(w) Se_u + sin(w) So_u) / (sqrt(pi) z^(1/4))
/// Ai'(-z) ~ (sin(w) Se_v - cos(w) So_v) * z^(1/4) / sqrt(pi)
/// ```
///
/// with `w = (2/3) z^(3/2) - pi/4` and even/odd-split `u_k`, `v_k` sums.
fn asym_neg(x: f64) -> (f64, f64) {
    let z = -x;
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    let ((ue, uo), (ve, vo)) = asym_sums(zeta, true);
    let w = zeta - std::f64::consts::FRAC_PI_4;
    let (sin_w, cos_w) = w.sin_cos();
    let z4 = z.sqrt().sqrt();
    let pre = 1.0 / std::f64::consts::PI.sqrt();
    (
        pre / z4 * (cos_w * ue + sin_w * uo),
        pre * z4 * (sin_w * ve - cos_w * vo),
    )
}

/// Accumulates the `u_k`/`v_k` asymptotic sums at `1/zeta`.
///
/// In the split mode the even-index and odd-index parts are returned
/// separately (with the `(-1)^k` of the parent sums folded in); otherwise
/// the full alternating sums land in the first slot of each pair.
fn asym_sums(zeta: f64, split: bool) -> ((f64, f64), (f64, f64)) {
    let mut u = 1.0; // u_k
    let mut su = (1.0, 0.0);
    let mut sv = (1.0, 0.0);
    let mut prev = 1.0f64;
    let mut zk = 1.0; // zeta^-k
    for k in 1..=26u32 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -u * (6.0 * kf + 1.0) / (6.0 * kf - 1.0);
        zk /= zeta;
        let tu = u * zk;
        if tu.abs() >= prev {
            break; // optimal truncation: terms started growing
        }
        prev = tu.abs();
        if split {
            // sign (-1)^k on pair index: for the even sum k runs over 2m with
            // sign (-1)^m, for the odd sum over 2m+1 with sign (-1)^m.
            let m = k / 2;
            let s = if m % 2 == 0 { 1.0 } else { -1.0 };
            if k % 2 == 0 {
                su.0 += s * tu;
                sv.0 += s * v * zk;
            } else {
                su.1 += s * tu;
                sv.1 += s * v * zk;
            }
        } else {
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            su.0 += s * tu;
            sv.0 += s * v * zk;
        }
        if tu.abs() < 1e-18 {
            break;
        }
    }
    (su, sv)
}

/// Compensated (Kahan) accumulator.
struct KahanSum {
    s: f64,
    c: f64,
}

impl KahanSum {
    fn new(first: f64) -> Self {
        KahanSum { s: first, c: 0.0 }
    }
    fn add(&mut self, v: f64) {
        let y = v - self.c;
        let t = self.s + y;
        self.c = (t - self.s) - y;
        self.s = t;
    }
    fn value(&self) -> f64 {
        self.s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values computed independently with 30-digit arithmetic.
    const AIRY_REF: [(f64, f64, f64); 18] = [
        (-15.0, 0.27821749087082892953, 0.27237420430864202083),
        (-10.0, 0.040241238486443190689, 0.9962650441327900559),
        (-7.5, 0.32177571638064787527, 0.31880950669855459621),
        (-7.0, 0.18428083525050563728, -0.77100816841012654773),
        (-5.0, 0.35076100902411431979, 0.32719281855444313679),
        (-2.0, 0.22740742820168557599, 0.61825902074169104141),
        (-1.0, 0.5355608832923521188, -0.010160567116645209395),
        (-0.5, 0.4757280916105395888, -0.20408167033954738614),
        (0.0, 0.35502805388781723926, -0.25881940379280679841),
        (0.5, 0.23169360648083348977, -0.22491053266468389314),
        (1.0, 0.13529241631288141552, -0.15914744129679321279),
        (2.0, 0.034924130423274379135, -0.053090384433653631704),
        (3.5, 0.0025840987869896349633, -0.005004413967952582832),
        (5.0, 0.00010834442813607441735, -0.000247413890868462476),
        (6.0, 9.9476943602528895702e-6, -0.000024765200397034954754),
        (7.0, 7.4921288639971670808e-7, -2.0081508947387919912e-6),
        (8.0, 4.6922076160992316256e-8, -1.3414392979067865743e-7),
        (10.0, 1.1047532552898685934e-10, -3.5206336767389236366e-10),
    ];

    #[test]
    fn lambert_fixed_points() {
        // 0 e^0 = 0, 1 e^1 = e, and the branch point -1/e -> -1.
        assert_eq!(lambert_w0(0.0).unwrap(), 0.0);
        assert!((lambert_w0(std::f64::consts::E).unwrap() - 1.0).abs() < 1e-14);
        assert!((lambert_w0(-1.0 / std::f64::consts::E).unwrap() + 1.0).abs() < 3e-8);
    }

    #[test]
    fn lambert_against_bisection_oracle() {
        // Independent oracle: bisection on w e^w = u over [0, 1].
        let u = 0.36787944117f64;
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if mid * mid.exp() > u {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        let w = lambert_w0(u).unwrap();
        println!("W({u}) = {w}, bisection oracle {oracle}");
        assert!((w - oracle).abs() < 1e-12);
        assert!((w - 0.27846454276021983).abs() < 1e-12);
    }

    #[test]
    fn lambert_residual_sweep() {
        // 1000 log-spaced arguments from just above the branch point to 1e6.
        let branch = -1.0 / std::f64::consts::E;
        let lo: f64 = 1e-6;
        let hi = 1e6 - branch;
        let mut worst = 0.0f64;
        for i in 0..1000 {
            let t = i as f64 / 999.0;
            let u = branch + lo * (hi / lo).powf(t);
            let w = lambert_w0(u).unwrap();
            let res = (w * w.exp() - u).abs();
            worst = worst.max(res / u.abs().max(1.0));
            assert!(res <= 1e-13 * u.abs().max(1.0), "residual {res} at u = {u}");
            assert!(w >= -1.0 - 1e-15);
        }
        println!("worst scaled Lambert residual: {worst:.3e}");
    }

    #[test]
    fn lambert_domain_error() {
        assert!(lambert_w0(-1.0 / std::f64::consts::E - 1e-9).is_err());
        // within clamping tolerance
        assert!(lambert_w0(-1.0 / std::f64::consts::E - 1e-16).is_ok());
    }

    #[test]
    fn airy_reference_values() {
        let mut worst = 0.0f64;
        for &(x, ai, aip) in &AIRY_REF {
            let (a, ap) = (airy_ai(x), airy_ai_prime(x));
            worst = worst.max((a - ai).abs()).max((ap - aip).abs());
            assert!((a - ai).abs() < 1e-11, "Ai({x}): {a} vs {ai}");
            assert!((ap - aip).abs() < 1e-11, "Ai'({x}): {ap} vs {aip}");
        }
        println!("worst absolute Airy error over reference table: {worst:.3e}");
    }

    #[test]
    fn airy_matches_leading_asymptotic_form() {
        // Ai(10) / (exp(-(2/3) 10^(3/2)) / (2 sqrt(pi) 10^(1/4))) -> 1.
        let x: f64 = 10.0;
        let lead = (-(2.0 / 3.0) * x.powf(1.5)).exp() / (2.0 * std::f64::consts::PI.sqrt() * x.powf(0.25));
        let ratio = airy_ai(x) / lead;
        println!("Ai(10)/leading = {ratio}");
        assert!((ratio - 1.0).abs() < 1e-2);
        // and to 1e-6 relative for x >= 8 including the first correction term
        for &x in &[8.0, 9.0, 12.0, 16.0] {
            let zeta = 2.0 / 3.0 * x * f64::sqrt(x);
            let lead = (-zeta).exp() / (2.0 * std::f64::consts::PI.sqrt() * x.powf(0.25));
            let rel = (airy_ai(x) / lead - 1.0).abs();
            // |Ai/lead - 1| ~ u1/zeta
            assert!(rel < 2.0 * (5.0 / 72.0) / zeta, "x = {x}: {rel}");
        }
    }

    #[test]
    fn airy_ode_residual_five_point() {
        // |Ai''(x) - x Ai(x)| <= 1e-5 with a 5-point stencil over [-15, 8].
        let h = 5e-3;
        let mut x = -15.0;
        let mut worst = 0.0f64;
        while x <= 8.0 {
            let d2 = (-airy_ai(x + 2.0 * h) + 16.0 * airy_ai(x + h) - 30.0 * airy_ai(x)
                + 16.0 * airy_ai(x - h)
                - airy_ai(x - 2.0 * h))
                / (12.0 * h * h);
            let res = (d2 - x * airy_ai(x)).abs();
            worst = worst.max(res);
            assert!(res <= 1e-5, "ODE residual {res} at x = {x}");
            x += 0.1;
        }
        println!("worst 5-point ODE residual: {worst:.3e}");
    }

    #[test]
    fn airy_prime_central_difference_consistency() {
        // |dAi/dx - Ai'| <= 1e-7 by central differences over [-10, 5].
        let h = 1e-5;
        let mut x = -10.0;
        while x <= 5.0 {
            let fd = (airy_ai(x + h) - airy_ai(x - h)) / (2.0 * h);
            assert!(
                (fd - airy_ai_prime(x)).abs() <= 1e-7,
                "consistency failure at x = {x}"
            );
            x += 0.25;
        }
    }

    #[test]
    fn regime_overlap_bands() {
        // The production crossovers sit at 5.5 and -7; both regimes must
        // agree on a band around each.
        for i in 0..=20 {
            let x = 5.0 + 0.5 * i as f64 / 20.0;
            let (s, sp) = series(x);
            let (a, ap) = asym_pos(x);
            assert!((s - a).abs() < 1e-9, "Ai overlap at {x}: {s} vs {a}");
            assert!((sp - ap).abs() < 1e-9, "Ai' overlap at {x}: {sp} vs {ap}");
        }
        for i in 0..=20 {
            let x = -7.0 - 0.6 * i as f64 / 20.0;
            let (s, sp) = series(x);
            let (a, ap) = asym_neg(x);
            assert!((s - a).abs() < 1e-9, "Ai overlap at {x}: {s} vs {a}");
            assert!((sp - ap).abs() < 1e-9, "Ai' overlap at {x}: {sp} vs {ap}");
        }
    }

    #[test]
    fn sigma_first_two() {
        let s0 = sigma(0).unwrap();
        let s1 = sigma(1).unwrap();
        println!("sigma_0 = {}, sigma_1 = {}", s0.value, s1.value);
        assert_eq!(s0.kind, SigmaKind::Extremum);
        assert_eq!(s1.kind, SigmaKind::Zero);
        assert!((s0.value - -1.018792971647471089).abs() < 1e-11);
        assert!((s1.value - -2.3381074104597670385).abs() < 1e-11);
    }

    #[test]
    fn sigma_invariants_to_30() {
        let mut prev = 0.0f64;
        for k in 0..=30 {
            let s = sigma(k).unwrap();
            assert!(s.value < 0.0);
            assert!(s.value < prev, "interlacing broken at k = {k}");
            match s.kind {
                SigmaKind::Extremum => {
                    assert!(airy_ai_prime(s.value).abs() < 1e-12, "Ai'(sigma_{k})")
                }
                SigmaKind::Zero => assert!(airy_ai(s.value).abs() < 1e-12, "Ai(sigma_{k})"),
            }
            if let Some((lo, hi)) = hethcote_bracket(k) {
                assert!(
                    s.value >= lo - 1e-12 && s.value <= hi + 1e-12,
                    "Hethcote bracket violated at k = {k}: {} not in [{lo}, {hi}]",
                    s.value
                );
            }
            prev = s.value;
        }
    }

    #[test]
    fn sigma_range_error() {
        assert!(sigma(51).is_err());
        assert!(sigma(50).is_ok());
    }
}
