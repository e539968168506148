//! The linearized system on a profile and its reduction to scalar form.
//!
//! All derivatives of profile quantities are taken by fourth-order finite
//! differences on the sample grid, segment by segment so that no stencil
//! straddles a discontinuity. The reduction identities (two-dimensional left
//! kernel of `A`, vanishing of the enstrophy-coupling numerator, `f4 = 0`)
//! then hold up to discretization error, which [`check_reduction`] bounds.

use num_complex::Complex64;

use crate::error::RgError;
use crate::model::PhysParams;
use crate::numerics::fd::derivative_segmented;
use crate::numerics::quad::simpson_uniform;
use crate::profiles::WaveProfile;
use crate::Result;

/// The matrices of the eigenvalue equations
/// `lambda A0 W + (A W)' = E W`, `W = (h, U, Phi, phi)`,
/// evaluated at a single profile state `(h, phi)` with wave speed `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearizedSystem {
    pub a0: [[f64; 4]; 4],
    pub a1: [[f64; 4]; 4],
    /// `A = A1 - c A0`; its left kernel is spanned by [`LinearizedSystem::l1`]
    /// and [`LinearizedSystem::l2`].
    pub a: [[f64; 4]; 4],
    pub e: [[f64; 4]; 4],
}

impl LinearizedSystem {
    pub fn at(h: f64, phi: f64, c: f64, p: &PhysParams) -> Self {
        let (gp, gl) = (p.g_perp, p.g_parallel);
        let h2 = h * h;
        let h3 = h2 * h;
        let c2 = c * c;
        let a0 = [
            [1.0, 0.0, 0.0, 0.0],
            [c, h, 0.0, 0.0],
            [0.5 * c2 + 1.5 * phi * h2 + gp * h, c * h, 0.5 * h3, 0.5 * h3],
            [phi, 0.0, 0.0, h],
        ];
        let a1 = [
            [c, h, 0.0, 0.0],
            [c2 + 3.0 * phi * h2 + gp * h, 2.0 * c * h, h3, h3],
            [
                0.5 * c * (c2 + 9.0 * phi * h2 + 4.0 * gp * h),
                0.5 * h * (3.0 * c2 + 3.0 * phi * h2 + 2.0 * gp * h),
                1.5 * c * h3,
                1.5 * c * h3,
            ],
            [c * phi, h * phi, 0.0, c * h],
        ];
        let mut a = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                a[i][j] = a1[i][j] - c * a0[i][j];
            }
        }
        let e = [
            [0.0, 0.0, 0.0, 0.0],
            [gl, -2.0 * p.c_f * c, -c2 * (p.c_t - p.c_f) / phi, 0.0],
            [c * gl, gl * h - 3.0 * p.c_f * c2, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
        ];
        LinearizedSystem { a0, a1, a, e }
    }

    /// First left null vector of `A`.
    pub fn l1(phi: f64) -> [f64; 4] {
        [-phi, 0.0, 0.0, 1.0]
    }

    /// Second left null vector of `A`.
    pub fn l2(h: f64, phi: f64, c: f64, p: &PhysParams) -> [f64; 4] {
        [
            c * c - 3.0 * phi * h * h - 2.0 * p.g_perp * h,
            -2.0 * c,
            2.0,
            0.0,
        ]
    }
}

fn mat_vec(m: &[[f64; 4]; 4], v: [Complex64; 4]) -> [Complex64; 4] {
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i] += m[i][j] * v[j];
        }
    }
    out
}

fn row_mat(row: &[f64; 4], m: &[[f64; 4]; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (j, o) in out.iter_mut().enumerate() {
        for i in 0..4 {
            *o += row[i] * m[i][j];
        }
    }
    out
}

fn jump_breaks(profile: &WaveProfile) -> Vec<usize> {
    profile.jumps.iter().map(|j| j.index).collect()
}

/// Worst-case residuals of the structural identities behind the scalar
/// reduction, reported by [`check_reduction`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionChecks {
    /// Sup over samples of `|l A|` for both left null vectors, relative to
    /// the matrix scale.
    pub kernel_residual: f64,
    /// Sup over samples of the enstrophy-coupling numerator
    /// `C_f c^2 - g|| h + (h^3 phi + g' h^2 / 2)'`, which vanishes on exact
    /// profiles and forces `Phi = 0` in the reduction.
    pub coupling_numerator: f64,
}

const KERNEL_TOL: f64 = 1e-11;
const NUMERATOR_TOL: f64 = 1e-8;

/// Verify, sample by sample, that the reduction of the eigenvalue problem to
/// scalar form is available on this profile: the left kernel of `A` has
/// dimension exactly two and the coupling numerator vanishes.
pub fn check_reduction(profile: &WaveProfile) -> Result<ReductionChecks> {
    let p = &profile.params;
    let c = profile.c;
    let n = profile.xs.len();
    let dx = profile.dx();

    let mut states: Vec<(f64, f64, f64)> = Vec::with_capacity(n + profile.jumps.len());
    for i in 0..n {
        states.push((profile.xs[i], profile.h[i], profile.phi[i]));
    }
    for j in &profile.jumps {
        states.push((j.x, j.h_left, j.phi_left));
    }

    let mut kernel_worst = 0.0_f64;
    for &(x, h, phi) in &states {
        let sys = LinearizedSystem::at(h, phi, c, p);
        let scale = sys
            .a
            .iter()
            .flatten()
            .fold(1.0_f64, |m, v| m.max(v.abs()));
        for l in [LinearizedSystem::l1(phi), LinearizedSystem::l2(h, phi, c, p)] {
            let r = row_mat(&l, &sys.a);
            let worst = r.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            let rel = worst / scale;
            kernel_worst = kernel_worst.max(rel);
            if rel > KERNEL_TOL {
                return Err(RgError::ReductionViolation(format!(
                    "left kernel residual {rel:.3e} at x = {x}"
                )));
            }
        }
        // rank(A) >= 2: the minor from rows (1, 2) and columns (1, 2) equals
        // -h^2 (g' + 3 h phi), nonzero on physical states. Together with the
        // two null vectors this pins rank(A) = 2.
        let minor = sys.a[0][0] * sys.a[1][1] - sys.a[0][1] * sys.a[1][0];
        if minor.abs() < 1e-10 * scale * scale {
            return Err(RgError::ReductionViolation(format!(
                "A has rank below 2 at x = {x}"
            )));
        }
    }

    // Coupling numerator from the sampled arrays alone.
    let w: Vec<f64> = profile
        .h
        .iter()
        .zip(&profile.phi)
        .map(|(h, phi)| phi * h * h * h + 0.5 * p.g_perp * h * h)
        .collect();
    let wx = derivative_segmented(&w, dx, 1, &jump_breaks(profile))?;
    let scale = (p.c_f * c * c).abs().max(1.0);
    let mut num_worst = 0.0_f64;
    for i in 0..n {
        let numerator = p.c_f * c * c - p.g_parallel * profile.h[i] + wx[i];
        let rel = numerator.abs() / scale;
        if rel > num_worst {
            num_worst = rel;
        }
        if rel > NUMERATOR_TOL {
            return Err(RgError::ReductionViolation(format!(
                "coupling numerator {:.3e} at x = {}",
                numerator, profile.xs[i]
            )));
        }
    }

    Ok(ReductionChecks {
        kernel_residual: kernel_worst,
        coupling_numerator: num_worst,
    })
}

/// Coefficients of the reduced scalar eigenvalue ODE
/// `U'' + f1 U' + (f2 lambda^2 + f3 lambda + f4) U = 0`
/// on the profile grid, plus the limits of `f1` at the two infinities.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedCoefficients {
    pub xs: Vec<f64>,
    pub f1: Vec<f64>,
    pub f2: Vec<f64>,
    pub f3: Vec<f64>,
    /// Identically zero on exact profiles; kept as a consistency gauge.
    pub f4: Vec<f64>,
    pub f1_minus: f64,
    pub f1_plus: f64,
}

/// Limit of `f1` at an endstate `(h0, phi0)`.
pub fn f1_limit(h0: f64, phi0: f64, p: &PhysParams) -> f64 {
    -p.g_parallel / (h0 * (p.g_perp + 3.0 * h0 * phi0))
}

/// Evaluate the scalar-reduction coefficients on the profile grid.
///
/// Derivative stencils are validated against the differentiated profile
/// relation `(g' h + 3 phi h^2) h' + phi' h^3 = g|| (h - h0)`; failure
/// indicates a grid too coarse to resolve the wave.
pub fn reduced_coefficients(profile: &WaveProfile) -> Result<ReducedCoefficients> {
    let p = &profile.params;
    let c = profile.c;
    let dx = profile.dx();
    let n = profile.xs.len();
    let breaks = jump_breaks(profile);

    let hx = derivative_segmented(&profile.h, dx, 1, &breaks)?;
    let hxx = derivative_segmented(&profile.h, dx, 2, &breaks)?;
    let px = derivative_segmented(&profile.phi, dx, 1, &breaks)?;
    let w3: Vec<f64> = profile
        .h
        .iter()
        .zip(&profile.phi)
        .map(|(h, phi)| phi * h * h * h)
        .collect();
    let w3xx = derivative_segmented(&w3, dx, 2, &breaks)?;

    // Stencil validation against the differentiated profile relation.
    let scale = p.g_parallel * (1.0 + profile.h0);
    for i in 0..n {
        let (h, phi) = (profile.h[i], profile.phi[i]);
        let residual = (p.g_perp * h + 3.0 * phi * h * h) * hx[i] + px[i] * h * h * h
            - p.g_parallel * (h - profile.h0);
        if residual.abs() > 1e-4 * scale {
            return Err(RgError::GridTooCoarse(format!(
                "derivative stencils violate the profile relation by {residual:.3e} at x = {}",
                profile.xs[i]
            )));
        }
    }

    let mut f1 = Vec::with_capacity(n);
    let mut f2 = Vec::with_capacity(n);
    let mut f3 = Vec::with_capacity(n);
    let mut f4 = Vec::with_capacity(n);
    for i in 0..n {
        let (h, phi) = (profile.h[i], profile.phi[i]);
        let den = h * (p.g_perp + 3.0 * h * phi);
        f1.push(
            (4.0 * px[i] * h * h + 12.0 * hx[i] * phi * h - p.g_parallel + 3.0 * p.g_perp * hx[i])
                / den,
        );
        f2.push(-1.0 / den);
        f3.push(-2.0 * p.c_f * c / (h * den));
        f4.push(
            (w3xx[i] + p.g_perp * hxx[i] * h + p.g_perp * hx[i] * hx[i]
                - p.g_parallel * hx[i])
                / (h * den),
        );
    }

    Ok(ReducedCoefficients {
        xs: profile.xs.clone(),
        f1,
        f2,
        f3,
        f4,
        f1_minus: f1_limit(profile.h0, profile.phi_minus, p),
        f1_plus: f1_limit(profile.h0, profile.phi_plus, p),
    })
}

/// One stationary solution of the linearized equations, encoding the freedom
/// in the construction of the wave family.
#[derive(Debug, Clone)]
pub struct KernelMode {
    pub xs: Vec<f64>,
    /// Samples of `W = (h, U, Phi, phi)`; `U` and `Phi` vanish.
    pub w: Vec<[f64; 4]>,
    /// Sup-norm residual of `(A W)' - E W` over the grid.
    pub residual: f64,
}

fn mode_residual(profile: &WaveProfile, w: &[[f64; 4]]) -> Result<f64> {
    let p = &profile.params;
    let c = profile.c;
    let n = profile.xs.len();
    let dx = profile.dx();
    let breaks = jump_breaks(profile);
    let mut aw = vec![[0.0; 4]; n];
    let mut ew = vec![[0.0; 4]; n];
    for i in 0..n {
        let sys = LinearizedSystem::at(profile.h[i], profile.phi[i], c, p);
        for r in 0..4 {
            for k in 0..4 {
                aw[i][r] += sys.a[r][k] * w[i][k];
                ew[i][r] += sys.e[r][k] * w[i][k];
            }
        }
    }
    let mut worst = 0.0_f64;
    for r in 0..4 {
        let comp: Vec<f64> = aw.iter().map(|v| v[r]).collect();
        let d = derivative_segmented(&comp, dx, 1, &breaks)?;
        for i in 0..n {
            worst = worst.max((d[i] - ew[i][r]).abs());
        }
    }
    Ok(worst)
}

/// Two independent zero modes of the linearized operator, built from the
/// two-parameter freedom of the wave family: shifting the relation constant,
/// and adding a localized height deviation with the matched enstrophy
/// response `phi = (g|| int h - (g' h + 3 phi h^2) h) / h^3`.
pub fn kernel_modes(profile: &WaveProfile) -> Result<[KernelMode; 2]> {
    if profile.period.is_some() {
        return Err(RgError::NotAsymptoticallyConstant);
    }
    let p = &profile.params;
    let n = profile.xs.len();
    let dx = profile.dx();
    let xs = &profile.xs;

    // Mode 1: delta kappa = 1, no height perturbation.
    let w1: Vec<[f64; 4]> = profile
        .h
        .iter()
        .map(|h| [0.0, 0.0, 0.0, 1.0 / (h * h * h)])
        .collect();

    // Mode 2: a smooth localized bump in h, centered in the longest
    // jump-free stretch of the domain so no stencil sees the discontinuity.
    let mut edges = vec![xs[0]];
    edges.extend(profile.jumps.iter().map(|j| j.x));
    edges.push(xs[n - 1]);
    let (mut lo, mut hi) = (xs[0], xs[n - 1]);
    let mut best = 0.0;
    for w in edges.windows(2) {
        if w[1] - w[0] > best {
            best = w[1] - w[0];
            lo = w[0];
            hi = w[1];
        }
    }
    let center = 0.5 * (lo + hi);
    let width = (0.25 * (hi - lo)).min(0.1 * (xs[n - 1] - xs[0]));
    let bump = |x: f64| {
        let s = (x - center) / width;
        let r = 1.0 - s * s;
        if r <= 0.0 {
            0.0
        } else {
            (-1.0 / r).exp()
        }
    };
    let hpert: Vec<f64> = xs.iter().map(|x| bump(*x)).collect();
    // Cumulative integral of the bump; Simpson on the prefix grids would be
    // quadratic, so reuse the fourth-order cumulative rule instead.
    let cum = crate::numerics::quad::cumulative_uniform(&hpert, dx);
    let mut w2 = Vec::with_capacity(n);
    for i in 0..n {
        let (h, phi) = (profile.h[i], profile.phi[i]);
        let vphi = (p.g_parallel * cum[i]
            - (p.g_perp * h + 3.0 * phi * h * h) * hpert[i])
            / (h * h * h);
        w2.push([hpert[i], 0.0, 0.0, vphi]);
    }

    let r1 = mode_residual(profile, &w1)?;
    let r2 = mode_residual(profile, &w2)?;
    Ok([
        KernelMode {
            xs: xs.clone(),
            w: w1,
            residual: r1,
        },
        KernelMode {
            xs: xs.clone(),
            w: w2,
            residual: r2,
        },
    ])
}

/// Gram determinant of two modes in the discrete L2 pairing, normalized by
/// the product of their norms: zero iff the modes are linearly dependent.
pub fn gram_independence(a: &KernelMode, b: &KernelMode, dx: f64) -> f64 {
    let dot = |u: &[[f64; 4]], v: &[[f64; 4]]| -> f64 {
        let prods: Vec<f64> = u
            .iter()
            .zip(v)
            .map(|(x, y)| x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>())
            .collect();
        simpson_uniform(&prods, dx)
    };
    let aa = dot(&a.w, &a.w);
    let bb = dot(&b.w, &b.w);
    let ab = dot(&a.w, &b.w);
    (aa * bb - ab * ab) / (aa * bb)
}

/// A full eigenfunction candidate `W = (h, U, Phi, phi)` reconstructed from
/// a scalar solution `U` of the reduced ODE. `Phi` vanishes identically and
/// `w2 = P U' - C_f c^2 U` is the continuous partner variable used across
/// discontinuities.
#[derive(Debug, Clone)]
pub struct EigenFunction {
    pub lambda: Complex64,
    pub xs: Vec<f64>,
    pub u: Vec<Complex64>,
    pub h: Vec<Complex64>,
    pub phi_small: Vec<Complex64>,
    pub w2: Vec<Complex64>,
}

/// Rebuild `(h, Phi, phi)` from a scalar solution via the algebraic
/// relations `h = -(h U)' / lambda`, `Phi = 0`, `phi = -phi_x U / lambda`.
/// The scalar solution is taken on the profile grid with its derivative.
pub fn reconstruct_eigenfunction(
    profile: &WaveProfile,
    lambda: Complex64,
    u: &[Complex64],
    du: &[Complex64],
) -> Result<EigenFunction> {
    if lambda.norm() == 0.0 {
        return Err(RgError::LambdaZero);
    }
    let n = profile.xs.len();
    if u.len() != n || du.len() != n {
        return Err(RgError::InvalidParameter(format!(
            "scalar solution has {} samples, profile has {n}",
            u.len()
        )));
    }
    let p = &profile.params;
    let mut h = Vec::with_capacity(n);
    let mut phi = Vec::with_capacity(n);
    let mut w2 = Vec::with_capacity(n);
    for i in 0..n {
        let x = profile.xs[i];
        let (hb, pb) = (profile.h[i], profile.phi[i]);
        let hbx = profile.h_deriv(x);
        let pbx = profile.phi_deriv(x);
        h.push(-(hbx * u[i] + hb * du[i]) / lambda);
        phi.push(-pbx * u[i] / lambda);
        let pcap = hb * hb * (p.g_perp + 3.0 * hb * pb);
        w2.push(pcap * du[i] - p.c_f * profile.c * profile.c * u[i]);
    }
    Ok(EigenFunction {
        lambda,
        xs: profile.xs.clone(),
        u: u.to_vec(),
        h,
        phi_small: phi,
        w2,
    })
}

/// Sup-norm residual of the full eigenvalue equations
/// `lambda A0 W + (A W)' = E W` on the grid, relative to the size of `W`
/// and the matrix scale. Derivatives are segmented finite differences.
pub fn eigen_residual(profile: &WaveProfile, ef: &EigenFunction) -> Result<f64> {
    let p = &profile.params;
    let c = profile.c;
    let n = profile.xs.len();
    let dx = profile.dx();
    let breaks = jump_breaks(profile);

    let mut aw = vec![[Complex64::new(0.0, 0.0); 4]; n];
    let mut rhs = vec![[Complex64::new(0.0, 0.0); 4]; n];
    let mut wscale = 0.0_f64;
    let mut mscale = 1.0_f64;
    for i in 0..n {
        let sys = LinearizedSystem::at(profile.h[i], profile.phi[i], c, p);
        let w = [ef.h[i], ef.u[i], Complex64::new(0.0, 0.0), ef.phi_small[i]];
        for v in w {
            wscale = wscale.max(v.norm());
        }
        mscale = mscale.max(
            sys.a0
                .iter()
                .chain(sys.a.iter())
                .chain(sys.e.iter())
                .flatten()
                .fold(0.0_f64, |m, v| m.max(v.abs())),
        );
        let a0w = mat_vec(&sys.a0, w);
        let awi = mat_vec(&sys.a, w);
        let ewi = mat_vec(&sys.e, w);
        aw[i] = awi;
        for r in 0..4 {
            rhs[i][r] = ewi[r] - ef.lambda * a0w[r];
        }
    }

    let mut worst = 0.0_f64;
    for r in 0..4 {
        let re: Vec<f64> = aw.iter().map(|v| v[r].re).collect();
        let im: Vec<f64> = aw.iter().map(|v| v[r].im).collect();
        let dre = derivative_segmented(&re, dx, 1, &breaks)?;
        let dim = derivative_segmented(&im, dx, 1, &breaks)?;
        for i in 0..n {
            let d = Complex64::new(dre[i], dim[i]);
            worst = worst.max((d - rhs[i][r]).norm());
        }
    }
    Ok(worst / (wscale * mscale * (1.0 + ef.lambda.norm())))
}

/// Midpoint values of a sampled smooth function, cubic in the interior,
/// quadratic on the first and last interval.
fn midpoints(a: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut out = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let v = if i == 0 {
            (3.0 * a[0] + 6.0 * a[1] - a[2]) / 8.0
        } else if i + 2 >= n {
            (3.0 * a[n - 1] + 6.0 * a[n - 2] - a[n - 3]) / 8.0
        } else {
            (9.0 * (a[i] + a[i + 1]) - a[i - 1] - a[i + 2]) / 16.0
        };
        out.push(v);
    }
    out
}

/// Certifies the Liouville transformation on a smooth profile.
///
/// Integrates the scalar form `U'' + f1 U' + (f2 l^2 + f3 l + f4) U = 0`
/// together with the weight `m = exp(1/2 int f1)`, integrates the potential
/// form `w'' = (f1'/2 + f1^2/4 - f2 l^2 - f3 l - f4) w` from the transformed
/// initial data, and returns the worst relative gap between `(m U, (m U)')`
/// and `(w, w')` over the grid. Both integrations are fourth order, so the
/// gap measures the transformation identity, not the discretization.
pub fn liouville_residual(profile: &WaveProfile, lambda: Complex64) -> Result<f64> {
    if !profile.jumps.is_empty() {
        return Err(RgError::InvalidParameter(
            "the Liouville transformation needs a smooth profile".into(),
        ));
    }
    let rc = reduced_coefficients(profile)?;
    let dx = profile.dx();
    let n = rc.xs.len();
    let f1x = derivative_segmented(&rc.f1, dx, 1, &[])?;

    let g_at = |f2: f64, f3: f64, f4: f64| lambda * (lambda * f2 + f3) + f4;
    let gq_at = |f1: f64, f1x: f64, f2: f64, f3: f64, f4: f64| {
        let g = g_at(f2, f3, f4);
        (f1, g, Complex64::new(0.5 * f1x + 0.25 * f1 * f1, 0.0) - g)
    };

    let f1m = midpoints(&rc.f1);
    let f1xm = midpoints(&f1x);
    let f2m = midpoints(&rc.f2);
    let f3m = midpoints(&rc.f3);
    let f4m = midpoints(&rc.f4);

    // Scalar-form state (U, U', m) and potential-form state (w, w').
    let mut u = Complex64::new(1.0, 0.0);
    let mut v = Complex64::new(0.0, 1.0);
    let mut m = 1.0_f64;
    let mut w = u;
    let mut y = v + 0.5 * rc.f1[0] * u;

    let mut worst = 0.0_f64;
    let gap = |u: Complex64, v: Complex64, m: f64, w: Complex64, y: Complex64, f1: f64| {
        let dev = (w - m * u).norm().max((y - m * (v + 0.5 * f1 * u)).norm());
        dev / w.norm().max(y.norm()).max(f64::MIN_POSITIVE)
    };
    for i in 0..n - 1 {
        worst = worst.max(gap(u, v, m, w, y, rc.f1[i]));

        let stages = [
            gq_at(rc.f1[i], f1x[i], rc.f2[i], rc.f3[i], rc.f4[i]),
            gq_at(f1m[i], f1xm[i], f2m[i], f3m[i], f4m[i]),
            gq_at(
                rc.f1[i + 1],
                f1x[i + 1],
                rc.f2[i + 1],
                rc.f3[i + 1],
                rc.f4[i + 1],
            ),
        ];
        let fu = |u: Complex64, v: Complex64, m: f64, k: usize| {
            let (f1, g, _) = stages[k];
            (v, -f1 * v - g * u, 0.5 * f1 * m)
        };
        let k1 = fu(u, v, m, 0);
        let k2 = fu(
            u + 0.5 * dx * k1.0,
            v + 0.5 * dx * k1.1,
            m + 0.5 * dx * k1.2,
            1,
        );
        let k3 = fu(
            u + 0.5 * dx * k2.0,
            v + 0.5 * dx * k2.1,
            m + 0.5 * dx * k2.2,
            1,
        );
        let k4 = fu(u + dx * k3.0, v + dx * k3.1, m + dx * k3.2, 2);
        u += dx / 6.0 * (k1.0 + 2.0 * (k2.0 + k3.0) + k4.0);
        v += dx / 6.0 * (k1.1 + 2.0 * (k2.1 + k3.1) + k4.1);
        m += dx / 6.0 * (k1.2 + 2.0 * (k2.2 + k3.2) + k4.2);

        let fw = |w: Complex64, y: Complex64, k: usize| {
            let (_, _, q) = stages[k];
            (y, q * w)
        };
        let l1 = fw(w, y, 0);
        let l2 = fw(w + 0.5 * dx * l1.0, y + 0.5 * dx * l1.1, 1);
        let l3 = fw(w + 0.5 * dx * l2.0, y + 0.5 * dx * l2.1, 1);
        let l4 = fw(w + dx * l3.0, y + dx * l3.1, 2);
        w += dx / 6.0 * (l1.0 + 2.0 * (l2.0 + l3.0) + l4.0);
        y += dx / 6.0 * (l1.1 + 2.0 * (l2.1 + l3.1) + l4.1);

        // Both states may be rescaled by a common factor; m stays.
        let big = u.norm().max(v.norm()).max(w.norm()).max(y.norm());
        if big > 1e120 {
            u /= big;
            v /= big;
            w /= big;
            y /= big;
        }
    }
    worst = worst.max(gap(u, v, m, w, y, rc.f1[n - 1]));
    Ok(worst)
}
