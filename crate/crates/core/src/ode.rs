//! Adaptive embedded Runge-Kutta integrators for small complex state
//! vectors, with cubic Hermite dense output: Dormand-Prince 5(4) and the
//! 8th-order Dormand-Prince 8(5,3) pair. The high-order pair takes far
//! fewer steps per oscillation period at tight tolerance, which matters for
//! the long weakly-oscillatory transits of the full model.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

// Dormand-Prince coefficients.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
// b - b_hat (embedded 4th-order error weights), including the FSAL stage.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Accuracy settings for the adaptive integrator.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    /// Bound on |sum |c_i|^2 - 1| drift reported by callers.
    pub norm: f64,
}

impl Default for Tolerances {
    /// Tight enough that a full reference-parameter transit keeps the state
    /// norm within 1e-8 of unity with the 8th-order pair.
    fn default() -> Self {
        Tolerances {
            rtol: 2e-11,
            atol: 1e-14,
            norm: 1e-8,
        }
    }
}

/// Counters collected while integrating.
#[derive(Debug, Clone, Copy, Default)]
pub struct SolverStats {
    pub steps: usize,
    pub rejected: usize,
    pub max_norm_drift: f64,
}

/// One accepted step, passed to the observer together with the derivative at
/// both ends for dense output.
pub struct Step<'a, const N: usize> {
    pub t0: f64,
    pub t1: f64,
    pub y0: &'a [C64; N],
    pub y1: &'a [C64; N],
    pub f0: &'a [C64; N],
    pub f1: &'a [C64; N],
}

impl<const N: usize> Step<'_, N> {
    /// Cubic Hermite interpolation at `t` within [t0, t1].
    pub fn interpolate(&self, t: f64) -> [C64; N] {
        let h = self.t1 - self.t0;
        let s = (t - self.t0) / h;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        let mut out = [C64::new(0.0, 0.0); N];
        for i in 0..N {
            out[i] = self.y0[i] * h00
                + self.f0[i] * (h10 * h)
                + self.y1[i] * h01
                + self.f1[i] * (h11 * h);
        }
        out
    }
}

/// Integrate dy/dt = f(t, y) from `t0` to `t1`, invoking `observer` after
/// every accepted step.
pub fn integrate_adaptive<const N: usize, F, O>(
    mut f: F,
    t0: f64,
    t1: f64,
    y0: [C64; N],
    tol: &Tolerances,
    mut observer: O,
) -> Result<([C64; N], SolverStats)>
where
    F: FnMut(f64, &[C64; N]) -> [C64; N],
    O: FnMut(&Step<'_, N>),
{
    let span = t1 - t0;
    assert!(span > 0.0, "integration span must be positive");
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut h = (span * 1e-6).min(1e-3).max(1e-12);
    let mut stats = SolverStats::default();
    let mut ks = [[C64::new(0.0, 0.0); N]; 7];

    while t < t1 {
        if h < 1e-13 * t.abs().max(1.0) {
            return Err(Error::StepUnderflow { t });
        }
        if t + h > t1 {
            h = t1 - t;
        }

        ks[0] = k1;
        for stage in 0..6 {
            let mut yi = y;
            for (j, kj) in ks.iter().enumerate().take(stage + 1) {
                let a = A[stage][j];
                if a != 0.0 {
                    for i in 0..N {
                        yi[i] += kj[i] * (a * h);
                    }
                }
            }
            ks[stage + 1] = f(t + C[stage] * h, &yi);
        }
        // 5th-order solution is the stage-6 argument (FSAL): rebuild it.
        let mut y1 = y;
        for (j, kj) in ks.iter().enumerate().take(6) {
            let b = A[5][j];
            if b != 0.0 {
                for i in 0..N {
                    y1[i] += kj[i] * (b * h);
                }
            }
        }

        // Scaled error norm.
        let mut err_sq = 0.0;
        for i in 0..N {
            let mut e = C64::new(0.0, 0.0);
            for (j, kj) in ks.iter().enumerate() {
                e += kj[i] * E[j];
            }
            let e = e * h;
            let scale = tol.atol + tol.rtol * y[i].norm().max(y1[i].norm());
            err_sq += (e.norm() / scale).powi(2);
        }
        let err = (err_sq / N as f64).sqrt();

        if err <= 1.0 {
            let k_next = ks[6];
            let step = Step {
                t0: t,
                t1: t + h,
                y0: &y,
                y1: &y1,
                f0: &ks[0],
                f1: &k_next,
            };
            observer(&step);
            t += h;
            y = y1;
            k1 = k_next;
            stats.steps += 1;
        } else {
            stats.rejected += 1;
        }
        let factor = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= factor;
    }
    Ok((y, stats))
}

// Dormand-Prince 8(5,3) coefficients (Hairer, Norsett & Wanner, "Solving
// Ordinary Differential Equations I", DOP853). Rows are stages 2..12.
#[rustfmt::skip]
const A8: [[f64; 11]; 11] = [
    [5.26001519587677318785587544488e-2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.97250569845378994544595329183e-2, 5.91751709536136983633785987549e-2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [2.95875854768068491816892993775e-2, 0.0, 8.87627564304205475450678981324e-2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [2.41365134159266685502369798665e-1, 0.0, -8.84549479328286085344864962717e-1, 9.24834003261792003115737966543e-1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.7037037037037037037037037037e-2, 0.0, 0.0, 1.70828608729473871279604482173e-1, 1.25467687566822425016691814123e-1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.7109375e-2, 0.0, 0.0, 1.70252211019544039314978060272e-1, 6.02165389804559606850219397283e-2, -1.7578125e-2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.70920001185047927108779319836e-2, 0.0, 0.0, 1.70383925712239993810214054705e-1, 1.07262030446373284651809199168e-1, -1.53194377486244017527936158236e-2, 8.27378916381402288758473766002e-3, 0.0, 0.0, 0.0, 0.0],
    [6.24110958716075717114429577812e-1, 0.0, 0.0, -3.36089262944694129406857109825, -8.68219346841726006818189891453e-1, 2.75920996994467083049415600797e1, 2.01540675504778934086186788979e1, -4.34898841810699588477366255144e1, 0.0, 0.0, 0.0],
    [4.77662536438264365890433908527e-1, 0.0, 0.0, -2.48811461997166764192642586468, -5.90290826836842996371446475743e-1, 2.12300514481811942347288949897e1, 1.52792336328824235832596922938e1, -3.32882109689848629194453265587e1, -2.03312017085086261358222928593e-2, 0.0, 0.0],
    [-9.3714243008598732571704021658e-1, 0.0, 0.0, 5.18637242884406370830023853209, 1.09143734899672957818500254654, -8.14978701074692612513997267357, -1.85200656599969598641566180701e1, 2.27394870993505042818970056734e1, 2.49360555267965238987089396762, -3.0467644718982195003823669022, 0.0],
    [2.27331014751653820792359768449, 0.0, 0.0, -1.05344954667372501984066689879e1, -2.00087205822486249909675718444, -1.79589318631187989172765950534e1, 2.79488845294199600508499808837e1, -2.85899827713502369474065508674, -8.87285693353062954433549289258, 1.23605671757943030647266201528e1, 6.43392746015763530355970484046e-1],
];
// Stage times for stages 2..12; the final stage is evaluated at t + h.
#[rustfmt::skip]
const C8: [f64; 11] = [
    5.26001519587677318785587544488e-2,
    7.89002279381515978178381316732e-2,
    1.1835034190722739672675719751e-1,
    2.8164965809277260327324280249e-1,
    1.0 / 3.0,
    0.25,
    4.0 / 13.0,
    1.27e2 / 1.95e2,
    0.6,
    6.0 / 7.0,
    1.0,
];
#[rustfmt::skip]
const B8: [f64; 12] = [
    5.42937341165687622380535766363e-2, 0.0, 0.0, 0.0, 0.0,
    4.45031289275240888144113950566,
    1.89151789931450038304281599044,
    -5.8012039600105847814672114227,
    3.1116436695781989440891606237e-1,
    -1.52160949662516078556178806805e-1,
    2.01365400804030348374776537501e-1,
    4.47106157277725905176885569043e-2,
];
// 3rd-order comparison weights on stages 1, 9, 12.
const BHH8: [f64; 3] = [
    2.44094488188976377952755905512e-1,
    7.33846688281611857341361741547e-1,
    2.20588235294117647058823529412e-2,
];
// 5th-order error weights.
#[rustfmt::skip]
const E8: [f64; 12] = [
    1.312004499419488073250102996e-2, 0.0, 0.0, 0.0, 0.0,
    -1.225156446376204440720569753,
    -4.957589496572501915214079952e-1,
    1.664377182454986536961530415,
    -3.503288487499736816886487290e-1,
    3.341791187130174790297318841e-1,
    8.192320648511571246570742613e-2,
    -2.235530786388629525884427845e-2,
];

/// Integrate dy/dt = f(t, y) from `t0` to `t1` with the 8th-order
/// Dormand-Prince pair, invoking `observer` after every accepted step.
///
/// Same contract as [`integrate_adaptive`]; the error estimate combines the
/// embedded 5th- and 3rd-order results as in Hairer's DOP853.
pub fn integrate_adaptive_dop853<const N: usize, F, O>(
    mut f: F,
    t0: f64,
    t1: f64,
    y0: [C64; N],
    tol: &Tolerances,
    mut observer: O,
) -> Result<([C64; N], SolverStats)>
where
    F: FnMut(f64, &[C64; N]) -> [C64; N],
    O: FnMut(&Step<'_, N>),
{
    let span = t1 - t0;
    assert!(span > 0.0, "integration span must be positive");
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut h = (span * 1e-6).min(1e-3).max(1e-12);
    let mut stats = SolverStats::default();
    let mut ks = [[C64::new(0.0, 0.0); N]; 12];
    let mut rejected_last = false;

    while t < t1 {
        if h < 1e-13 * t.abs().max(1.0) {
            return Err(Error::StepUnderflow { t });
        }
        if t + h > t1 {
            h = t1 - t;
        }

        ks[0] = k1;
        for stage in 0..11 {
            let mut yi = y;
            for (j, kj) in ks.iter().enumerate().take(stage + 1) {
                let a = A8[stage][j];
                if a != 0.0 {
                    for i in 0..N {
                        yi[i] += kj[i] * (a * h);
                    }
                }
            }
            ks[stage + 1] = f(t + C8[stage] * h, &yi);
        }

        let mut ksum = [C64::new(0.0, 0.0); N];
        for (j, kj) in ks.iter().enumerate() {
            let b = B8[j];
            if b != 0.0 {
                for i in 0..N {
                    ksum[i] += kj[i] * b;
                }
            }
        }
        let mut y1 = y;
        for i in 0..N {
            y1[i] += ksum[i] * h;
        }

        // Combined 5th/3rd-order scaled error estimate.
        let mut err5_sq = 0.0;
        let mut err3_sq = 0.0;
        for i in 0..N {
            let scale = tol.atol + tol.rtol * y[i].norm().max(y1[i].norm());
            let mut e5 = C64::new(0.0, 0.0);
            for (j, kj) in ks.iter().enumerate() {
                let w = E8[j];
                if w != 0.0 {
                    e5 += kj[i] * w;
                }
            }
            let e3 = ksum[i] - ks[0][i] * BHH8[0] - ks[8][i] * BHH8[1] - ks[11][i] * BHH8[2];
            err5_sq += (e5 / scale).norm_sqr();
            err3_sq += (e3 / scale).norm_sqr();
        }
        let mut deno = err5_sq + 0.01 * err3_sq;
        if deno <= 0.0 {
            deno = 1.0;
        }
        let err = h.abs() * err5_sq * (1.0 / (N as f64 * deno)).sqrt();

        let fac11 = if err > 0.0 { err.powf(1.0 / 8.0) } else { 0.0 };
        if err <= 1.0 {
            let k_next = f(t + h, &y1);
            let step = Step {
                t0: t,
                t1: t + h,
                y0: &y,
                y1: &y1,
                f0: &ks[0],
                f1: &k_next,
            };
            observer(&step);
            t += h;
            y = y1;
            k1 = k_next;
            stats.steps += 1;
            let mut h_new = h / (fac11 / 0.9).clamp(1.0 / 6.0, 3.0);
            if rejected_last {
                h_new = h_new.min(h);
            }
            rejected_last = false;
            h = h_new;
        } else {
            stats.rejected += 1;
            rejected_last = true;
            h /= (fac11 / 0.9).min(3.0);
        }
    }
    Ok((y, stats))
}
