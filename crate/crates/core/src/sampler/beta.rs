//! Full conditional of the stacked coefficients β = (β₁', β₂')' and its
//! leave-one-out downdates.
//!
//! With c = 1/(1−ρ²), d = ρ/σ and b_i = [x_i; −d·x_i], the joint Gaussian
//! kernel of observation i splits as c·(u_i − d·y_i − b_i'β)² + (y_i − x_i'β₂)²/σ²,
//! so removing u_i from the system is the rank-one change P → P − c·b_i b_i'.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::distributions::RandomStream;
use crate::error::{Error, Result};
use crate::model::check_rho;

use super::workspace::SamplerWorkspace;

/// Condition-number estimate of the precision matrix above which the system
/// is treated as singular.
pub const MAX_CONDITION: f64 = 1e14;

/// Sherman–Morrison denominators below this trigger a direct re-solve.
pub const DOWNDATE_FLOOR: f64 = 1e-10;

/// N(μ_β, Σ_β) together with the precision system it came from.
#[derive(Debug, Clone)]
pub struct FullConditionalBeta {
    mu: DVector<f64>,
    sigma: DMatrix<f64>,
    /// Lower Cholesky factor of Σ_β, used for drawing.
    sigma_chol: DMatrix<f64>,
    precision: DMatrix<f64>,
    precision_chol: Cholesky<f64, Dyn>,
    rhs: DVector<f64>,
    rho: f64,
    sd: f64,
}

/// Leave-one-out predictive moments of u_i with β integrated out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LooMoments {
    pub m: f64,
    pub v: f64,
}

/// Moments of β with u_i removed from the system.
#[derive(Debug, Clone, PartialEq)]
pub struct LooDowndate {
    pub mu: DVector<f64>,
    pub sigma: DMatrix<f64>,
    /// True when the rank-one denominator was degenerate and the system was
    /// re-solved directly.
    pub fallback: bool,
}

/// Condition estimate of the Jacobi-scaled matrix D^{-1/2}·M·D^{-1/2},
/// D = diag(M), from the Cholesky diagonal. Cholesky accuracy is invariant
/// to diagonal scaling, so a tiny prior variance on one coefficient does
/// not by itself make the system ill-conditioned.
fn condition_estimate(m: &DMatrix<f64>, chol: &Cholesky<f64, Dyn>) -> f64 {
    let l = chol.l_dirty();
    let (lo, hi) = (0..m.nrows())
        .map(|j| (l[(j, j)] / m[(j, j)].sqrt()).abs())
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    (hi / lo).powi(2)
}

fn factor(m: &DMatrix<f64>, context: &str) -> Result<Cholesky<f64, Dyn>> {
    let chol = m.clone().cholesky().ok_or_else(|| Error::NotPositiveDefinite {
        context: context.into(),
    })?;
    let condition = condition_estimate(m, &chol);
    if !(condition <= MAX_CONDITION) {
        return Err(Error::IllConditioned {
            context: context.into(),
            condition,
        });
    }
    Ok(chol)
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let d = m.nrows();
    for j in 0..d {
        for k in (j + 1)..d {
            let v = 0.5 * (m[(j, k)] + m[(k, j)]);
            m[(j, k)] = v;
            m[(k, j)] = v;
        }
    }
}

/// h = c·Σ_i b_i(u_i − d·y_i) + [0; X'y/σ²], written in terms of X'u and X'y.
fn rhs_from(xtu: &DVector<f64>, xty: &DVector<f64>, c: f64, d: f64, sigma2: f64) -> DVector<f64> {
    let p = xtu.len();
    let mut h = DVector::zeros(2 * p);
    for j in 0..p {
        h[j] = c * (xtu[j] - d * xty[j]);
        h[p + j] = c * (-d * xtu[j]) + c / sigma2 * xty[j];
    }
    h
}

impl FullConditionalBeta {
    /// Wrap given moments for drawing. The precision system is set up as if
    /// ρ = 0 and σ = 1.
    pub fn from_moments(mu: DVector<f64>, sigma: DMatrix<f64>) -> Result<Self> {
        let d = mu.len();
        if sigma.nrows() != d || sigma.ncols() != d {
            return Err(Error::Dimension(format!(
                "mean has length {d}, covariance is {}x{}",
                sigma.nrows(),
                sigma.ncols()
            )));
        }
        let sigma_chol = sigma
            .clone()
            .cholesky()
            .ok_or_else(|| Error::NotPositiveDefinite {
                context: "coefficient covariance".into(),
            })?
            .unpack();
        let precision = sigma
            .clone()
            .cholesky()
            .map(|c| c.inverse())
            .ok_or_else(|| Error::NotPositiveDefinite {
                context: "coefficient covariance".into(),
            })?;
        let precision_chol = precision
            .clone()
            .cholesky()
            .ok_or_else(|| Error::NotPositiveDefinite {
                context: "coefficient precision".into(),
            })?;
        let rhs = &precision * &mu;
        Ok(Self {
            mu,
            sigma,
            sigma_chol,
            precision,
            precision_chol,
            rhs,
            rho: 0.0,
            sd: 1.0,
        })
    }

    pub fn mu(&self) -> &DVector<f64> {
        &self.mu
    }

    pub fn sigma(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    pub fn sigma_cholesky(&self) -> &DMatrix<f64> {
        &self.sigma_chol
    }

    pub fn precision(&self) -> &DMatrix<f64> {
        &self.precision
    }

    /// Number of coefficients per block.
    pub fn p(&self) -> usize {
        self.mu.len() / 2
    }

    fn c(&self) -> f64 {
        1.0 / (1.0 - self.rho * self.rho)
    }

    fn d(&self) -> f64 {
        self.rho / self.sd
    }

    /// Recompute μ_β from the workspace's current `X'u`, keeping Σ_β.
    pub fn refresh_mean(&mut self, ws: &SamplerWorkspace) {
        self.rhs = rhs_from(ws.xtu(), ws.xty(), self.c(), self.d(), self.sd * self.sd);
        self.mu = self.precision_chol.solve(&self.rhs);
    }

    fn b_vector(&self, ws: &SamplerWorkspace, i: usize, out: &mut DVector<f64>) {
        let p = self.p();
        let d = self.d();
        let x = ws.row(i);
        for j in 0..p {
            out[j] = x[j];
            out[p + j] = -d * x[j];
        }
    }

    fn loo_rhs(&self, ws: &SamplerWorkspace, b: &DVector<f64>, u_i: f64, y_i: f64) -> DVector<f64> {
        let mut h = rhs_from(ws.xtu(), ws.xty(), self.c(), self.d(), self.sd * self.sd);
        h.axpy(-self.c() * (u_i - self.d() * y_i), b, 1.0);
        h
    }

    fn direct_loo(&self, b: &DVector<f64>, h: &DVector<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
        let mut reduced = self.precision.clone();
        reduced.ger(-self.c(), b, b, 1.0);
        let chol = factor(&reduced, "leave-one-out precision")?;
        let mu = chol.solve(h);
        let mut sigma = chol.inverse();
        symmetrize(&mut sigma);
        Ok((mu, sigma))
    }
}

/// Σ_β = (Σ₀⁻¹ + Σ⁻¹ ⊗ X'X)⁻¹ and μ_β = Σ_β·𝕏'Σ_ε⁻¹[u; y], built from the
/// p×p cross-products in `ws` and the prior variances `v1`, `v2`.
pub fn compute_beta_full_conditional(
    ws: &SamplerWorkspace,
    sigma2: f64,
    rho: f64,
    v1: &DVector<f64>,
    v2: &DVector<f64>,
) -> Result<FullConditionalBeta> {
    check_rho(rho)?;
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(Error::validation(format!("sigma2 must be positive, got {sigma2}")));
    }
    let p = ws.p();
    if v1.len() != p || v2.len() != p {
        return Err(Error::Dimension(format!(
            "prior variances have lengths ({}, {}), design has {p} columns",
            v1.len(),
            v2.len()
        )));
    }
    let sd = sigma2.sqrt();
    let c = 1.0 / (1.0 - rho * rho);
    let d = rho / sd;
    let gram = ws.gram();
    let mut precision = DMatrix::zeros(2 * p, 2 * p);
    for k in 0..p {
        for j in 0..p {
            let g = gram[(j, k)];
            precision[(j, k)] = c * g;
            precision[(j, p + k)] = -c * d * g;
            precision[(p + j, k)] = -c * d * g;
            precision[(p + j, p + k)] = c / sigma2 * g;
        }
    }
    for j in 0..p {
        precision[(j, j)] += 1.0 / v1[j];
        precision[(p + j, p + j)] += 1.0 / v2[j];
    }
    let precision_chol = factor(&precision, "coefficient full-conditional precision")?;
    let mut sigma = precision_chol.inverse();
    symmetrize(&mut sigma);
    let sigma_chol = sigma
        .clone()
        .cholesky()
        .ok_or_else(|| Error::NotPositiveDefinite {
            context: "coefficient full-conditional covariance".into(),
        })?
        .unpack();
    let rhs = rhs_from(ws.xtu(), ws.xty(), c, d, sigma2);
    let mu = precision_chol.solve(&rhs);
    Ok(FullConditionalBeta {
        mu,
        sigma,
        sigma_chol,
        precision,
        precision_chol,
        rhs,
        rho,
        sd,
    })
}

/// μ_{β,−i} and Σ_{β,−i}: the full conditional with u_i dropped from the
/// latent equation (y_i stays). `u_i` is the current value of u_i, which
/// must be the one reflected in the workspace's `X'u`.
pub fn loo_downdate(
    fc: &FullConditionalBeta,
    ws: &SamplerWorkspace,
    i: usize,
    u_i: f64,
) -> Result<LooDowndate> {
    let mut b = DVector::zeros(2 * fc.p());
    fc.b_vector(ws, i, &mut b);
    let h = fc.loo_rhs(ws, &b, u_i, ws.y()[i]);
    let w = &fc.sigma * &b;
    let q = b.dot(&w);
    let c = fc.c();
    let den = 1.0 - c * q;
    if den < DOWNDATE_FLOOR {
        let (mu, sigma) = fc.direct_loo(&b, &h)?;
        return Ok(LooDowndate {
            mu,
            sigma,
            fallback: true,
        });
    }
    let mut sigma = fc.sigma.clone();
    sigma.ger(c / den, &w, &w, 1.0);
    let mu = &sigma * &h;
    Ok(LooDowndate {
        mu,
        sigma,
        fallback: false,
    })
}

/// Scratch buffers for [`loo_moments_with`].
pub(crate) struct LooScratch {
    b: DVector<f64>,
    w: DVector<f64>,
    h: DVector<f64>,
}

impl LooScratch {
    pub(crate) fn new(p: usize) -> Self {
        Self {
            b: DVector::zeros(2 * p),
            w: DVector::zeros(2 * p),
            h: DVector::zeros(2 * p),
        }
    }
}

/// m_i = d·y_i + b_i'μ_{β,−i} and v_i = b_i'Σ_{β,−i}b_i + 1 − ρ², in O(p²)
/// without forming Σ_{β,−i}. Returns the moments and whether the direct
/// fallback was needed.
pub fn loo_moments(
    fc: &FullConditionalBeta,
    ws: &SamplerWorkspace,
    i: usize,
    u_i: f64,
) -> Result<(LooMoments, bool)> {
    let mut scratch = LooScratch::new(fc.p());
    loo_moments_with(fc, ws, i, u_i, &mut scratch)
}

pub(crate) fn loo_moments_with(
    fc: &FullConditionalBeta,
    ws: &SamplerWorkspace,
    i: usize,
    u_i: f64,
    s: &mut LooScratch,
) -> Result<(LooMoments, bool)> {
    let p = fc.p();
    let c = fc.c();
    let d = fc.d();
    let y_i = ws.y()[i];
    fc.b_vector(ws, i, &mut s.b);
    // h_{−i} = h − c·b·(u_i − d·y_i), with h built from the live X'u
    let shift = c * (u_i - d * y_i);
    let xtu = ws.xtu();
    let xty = ws.xty();
    let sigma2 = fc.sd * fc.sd;
    for j in 0..p {
        s.h[j] = c * (xtu[j] - d * xty[j]) - shift * s.b[j];
        s.h[p + j] = c * (-d * xtu[j]) + c / sigma2 * xty[j] - shift * s.b[p + j];
    }
    s.w.gemv(1.0, &fc.sigma, &s.b, 0.0);
    let q = s.b.dot(&s.w);
    let den = 1.0 - c * q;
    let floor = 1.0 - fc.rho * fc.rho;
    if den < DOWNDATE_FLOOR {
        let (mu, sigma) = fc.direct_loo(&s.b, &s.h)?;
        let m = d * y_i + s.b.dot(&mu);
        let v = (&sigma * &s.b).dot(&s.b) + floor;
        return Ok((LooMoments { m, v }, true));
    }
    let m = d * y_i + s.w.dot(&s.h) / den;
    let v = q / den + floor;
    Ok((LooMoments { m, v }, false))
}

/// One draw β ~ N(μ_β, Σ_β). The first p standard normals come from
/// `latent`, the last p from `outcome`.
pub fn sample_beta(
    fc: &FullConditionalBeta,
    latent: &mut RandomStream,
    outcome: &mut RandomStream,
) -> (DVector<f64>, DVector<f64>) {
    let p = fc.p();
    let mut eta = DVector::zeros(2 * p);
    for j in 0..p {
        eta[j] = latent.std_normal();
    }
    for j in 0..p {
        eta[p + j] = outcome.std_normal();
    }
    let draw = &fc.mu + &fc.sigma_chol * eta;
    (draw.rows(0, p).into_owned(), draw.rows(p, p).into_owned())
}
