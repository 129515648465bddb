//! Constraint kinds of the convex subproblem, with analytic values,
//! gradients, and Hessians.
//!
//! Every kind is convex on the open domain `{f > 0, r > 0, gamma > -1}`;
//! the nonlinear kinds return `+inf` outside their domain so that line
//! searches and feasibility checks reject such points.

use nalgebra::DMatrix;
use serde::Serialize;

/// One (q, r) pair of the per-BS SCA fronthaul surrogate, with its anchor
/// difference `d = q' - r'`.
#[derive(Debug, Clone, Serialize)]
pub struct ScaPair {
    pub q: usize,
    pub r: usize,
    pub anchor_diff: f64,
}

/// Rank-two quadratic `|c1.x|^2 + |c2.x|^2` over one beamformer block,
/// the real form of `|h^dagger w|^2`. Both vectors span `block.len()`
/// consecutive variables starting at `offset`.
#[derive(Debug, Clone, Serialize)]
pub struct RankTwo {
    pub offset: usize,
    pub c_re: Vec<f64>,
    pub c_im: Vec<f64>,
}

impl RankTwo {
    /// Builds the real lift of a complex channel row `h` over an interleaved
    /// `[re0, im0, re1, im1, ...]` beamformer block: afterwards
    /// `Re(h^dagger w) = c_re . x` and `Im(h^dagger w) = c_im . x`.
    pub fn from_channel(offset: usize, h: &[num_complex::Complex64]) -> Self {
        let mut c_re = Vec::with_capacity(2 * h.len());
        let mut c_im = Vec::with_capacity(2 * h.len());
        for c in h {
            c_re.push(c.re);
            c_re.push(c.im);
            c_im.push(-c.im);
            c_im.push(c.re);
        }
        RankTwo { offset, c_re, c_im }
    }

    pub fn dots(&self, x: &[f64]) -> (f64, f64) {
        let blk = &x[self.offset..self.offset + self.c_re.len()];
        let re = self.c_re.iter().zip(blk).map(|(c, v)| c * v).sum();
        let im = self.c_im.iter().zip(blk).map(|(c, v)| c * v).sum();
        (re, im)
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let (re, im) = self.dots(x);
        re * re + im * im
    }
}

#[derive(Debug, Clone, Serialize)]
pub enum ConstraintKind {
    /// `sum c_j x_j <= rhs`
    Linear { terms: Vec<(usize, f64)>, rhs: f64 },
    /// `sum a_j x_j^2 + sum c_j x_j <= rhs` with every `a_j >= 0`
    DiagQuad {
        quad: Vec<(usize, f64)>,
        lin: Vec<(usize, f64)>,
        rhs: f64,
    },
    /// Per-BS SCA fronthaul surrogate:
    /// `sum_k [(q_k + r_k)^2 - 2 d_k (q_k - r_k)] + constant <= rhs`
    ScaFronthaul {
        pairs: Vec<ScaPair>,
        constant: f64,
        rhs: f64,
    },
    /// Quadratic-transform residual `g_k <= 0`:
    /// `x_gamma + lin.x + usq * (noise + sum_i quad_i(x)) <= 0`
    FpResidual {
        gamma: usize,
        lin: Vec<(usize, f64)>,
        /// `|u_k|^2`
        usq: f64,
        /// effective noise (sigma^2 plus any fixed foreign interference)
        noise: f64,
        quads: Vec<RankTwo>,
    },
    /// `x_r - bandwidth * log2(1 + x_gamma) <= 0`
    LogRate { rate: usize, gamma: usize, bandwidth: f64 },
    /// `a / x_f + c / x_r <= rhs` on `x_f, x_r > 0`
    Hyperbolic { f: usize, r: usize, a: f64, c: f64, rhs: f64 },
    /// EC power: `sum_j x_{w_j}^2 + coeff * (sum_k x_{f_k})^exponent <= rhs`
    PowerEc {
        w: Vec<usize>,
        f: Vec<usize>,
        coeff: f64,
        exponent: f64,
        rhs: f64,
    },
    /// Phase-I relaxation `inner(x) - x_s <= 0`.
    Relaxed { inner: Box<ConstraintKind>, s: usize },
}

/// A tagged constraint of a subproblem. `domain_guard` marks simple bound
/// constraints that keep nonlinear kinds inside their open domain; phase I
/// keeps guards hard and relaxes everything else.
#[derive(Debug, Clone, Serialize)]
pub struct Constraint {
    pub label: String,
    pub domain_guard: bool,
    pub kind: ConstraintKind,
}

impl ConstraintKind {
    /// Spec-level taxonomy tag used in debug dumps.
    pub fn tag(&self) -> &'static str {
        match self {
            ConstraintKind::Linear { .. } => "linear",
            ConstraintKind::DiagQuad { .. }
            | ConstraintKind::ScaFronthaul { .. }
            | ConstraintKind::FpResidual { .. } => "convex-quadratic",
            ConstraintKind::LogRate { .. } => "log-rate",
            ConstraintKind::Hyperbolic { .. } => "hyperbolic",
            ConstraintKind::PowerEc { .. } => "power-term",
            ConstraintKind::Relaxed { inner, .. } => inner.tag(),
        }
    }

    /// Constraint function value; `<= 0` means satisfied, `+inf` marks a
    /// domain violation.
    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            ConstraintKind::Linear { terms, rhs } => {
                terms.iter().map(|(j, c)| c * x[*j]).sum::<f64>() - rhs
            }
            ConstraintKind::DiagQuad { quad, lin, rhs } => {
                let q: f64 = quad.iter().map(|(j, a)| a * x[*j] * x[*j]).sum();
                let l: f64 = lin.iter().map(|(j, c)| c * x[*j]).sum();
                q + l - rhs
            }
            ConstraintKind::ScaFronthaul { pairs, constant, rhs } => {
                let mut v = *constant;
                for p in pairs {
                    let s = x[p.q] + x[p.r];
                    let d = x[p.q] - x[p.r];
                    v += s * s - 2.0 * p.anchor_diff * d;
                }
                v - rhs
            }
            ConstraintKind::FpResidual { gamma, lin, usq, noise, quads } => {
                let mut interference = *noise;
                for q in quads {
                    interference += q.value(x);
                }
                let l: f64 = lin.iter().map(|(j, c)| c * x[*j]).sum();
                x[*gamma] + l + usq * interference
            }
            ConstraintKind::LogRate { rate, gamma, bandwidth } => {
                if x[*gamma] <= -1.0 {
                    return f64::INFINITY;
                }
                x[*rate] - bandwidth * (1.0 + x[*gamma]).log2()
            }
            ConstraintKind::Hyperbolic { f, r, a, c, rhs } => {
                if x[*f] <= 0.0 || x[*r] <= 0.0 {
                    return f64::INFINITY;
                }
                a / x[*f] + c / x[*r] - rhs
            }
            ConstraintKind::PowerEc { w, f, coeff, exponent, rhs } => {
                let fsum: f64 = f.iter().map(|j| x[*j]).sum();
                if fsum < 0.0 {
                    return f64::INFINITY;
                }
                let wsum: f64 = w.iter().map(|j| x[*j] * x[*j]).sum();
                wsum + coeff * fsum.powf(*exponent) - rhs
            }
            ConstraintKind::Relaxed { inner, s } => inner.value(x) - x[*s],
        }
    }

    /// Appends the sparse gradient as (index, value) pairs. Entries may
    /// repeat; consumers must accumulate.
    pub fn grad(&self, x: &[f64], idx: &mut Vec<usize>, val: &mut Vec<f64>) {
        idx.clear();
        val.clear();
        match self {
            ConstraintKind::Linear { terms, .. } => {
                for (j, c) in terms {
                    idx.push(*j);
                    val.push(*c);
                }
            }
            ConstraintKind::DiagQuad { quad, lin, .. } => {
                for (j, a) in quad {
                    idx.push(*j);
                    val.push(2.0 * a * x[*j]);
                }
                for (j, c) in lin {
                    idx.push(*j);
                    val.push(*c);
                }
            }
            ConstraintKind::ScaFronthaul { pairs, .. } => {
                for p in pairs {
                    let s = x[p.q] + x[p.r];
                    idx.push(p.q);
                    val.push(2.0 * s - 2.0 * p.anchor_diff);
                    idx.push(p.r);
                    val.push(2.0 * s + 2.0 * p.anchor_diff);
                }
            }
            ConstraintKind::FpResidual { gamma, lin, usq, quads, .. } => {
                idx.push(*gamma);
                val.push(1.0);
                for (j, c) in lin {
                    idx.push(*j);
                    val.push(*c);
                }
                for q in quads {
                    let (re, im) = q.dots(x);
                    for (o, (cr, ci)) in q.c_re.iter().zip(&q.c_im).enumerate() {
                        idx.push(q.offset + o);
                        val.push(2.0 * usq * (re * cr + im * ci));
                    }
                }
            }
            ConstraintKind::LogRate { rate, gamma, bandwidth } => {
                idx.push(*rate);
                val.push(1.0);
                idx.push(*gamma);
                val.push(-bandwidth / ((1.0 + x[*gamma]) * std::f64::consts::LN_2));
            }
            ConstraintKind::Hyperbolic { f, r, a, c, .. } => {
                idx.push(*f);
                val.push(-a / (x[*f] * x[*f]));
                idx.push(*r);
                val.push(-c / (x[*r] * x[*r]));
            }
            ConstraintKind::PowerEc { w, f, coeff, exponent, .. } => {
                for j in w {
                    idx.push(*j);
                    val.push(2.0 * x[*j]);
                }
                let fsum: f64 = f.iter().map(|j| x[*j]).sum();
                let d = coeff * exponent * fsum.powf(exponent - 1.0);
                for j in f {
                    idx.push(*j);
                    val.push(d);
                }
            }
            ConstraintKind::Relaxed { inner, s } => {
                inner.grad(x, idx, val);
                idx.push(*s);
                val.push(-1.0);
            }
        }
    }

    /// Accumulates `scale * hessian` into `h`.
    pub fn add_hess(&self, x: &[f64], scale: f64, h: &mut DMatrix<f64>) {
        match self {
            ConstraintKind::Linear { .. } => {}
            ConstraintKind::DiagQuad { quad, .. } => {
                for (j, a) in quad {
                    h[(*j, *j)] += scale * 2.0 * a;
                }
            }
            ConstraintKind::ScaFronthaul { pairs, .. } => {
                for p in pairs {
                    h[(p.q, p.q)] += 2.0 * scale;
                    h[(p.r, p.r)] += 2.0 * scale;
                    h[(p.q, p.r)] += 2.0 * scale;
                    h[(p.r, p.q)] += 2.0 * scale;
                }
            }
            ConstraintKind::FpResidual { usq, quads, .. } => {
                let w = 2.0 * usq * scale;
                for q in quads {
                    let n = q.c_re.len();
                    for a in 0..n {
                        let ia = q.offset + a;
                        for b in 0..n {
                            h[(ia, q.offset + b)] +=
                                w * (q.c_re[a] * q.c_re[b] + q.c_im[a] * q.c_im[b]);
                        }
                    }
                }
            }
            ConstraintKind::LogRate { gamma, bandwidth, .. } => {
                let g = 1.0 + x[*gamma];
                h[(*gamma, *gamma)] += scale * bandwidth / (g * g * std::f64::consts::LN_2);
            }
            ConstraintKind::Hyperbolic { f, r, a, c, .. } => {
                h[(*f, *f)] += scale * 2.0 * a / x[*f].powi(3);
                h[(*r, *r)] += scale * 2.0 * c / x[*r].powi(3);
            }
            ConstraintKind::PowerEc { w, f, coeff, exponent, .. } => {
                for j in w {
                    h[(*j, *j)] += 2.0 * scale;
                }
                if f.is_empty() {
                    return;
                }
                let fsum: f64 = f.iter().map(|j| x[*j]).sum();
                let d2 = coeff * exponent * (exponent - 1.0) * fsum.powf(exponent - 2.0);
                for a in f {
                    for b in f {
                        h[(*a, *b)] += scale * d2;
                    }
                }
            }
            ConstraintKind::Relaxed { inner, .. } => inner.add_hess(x, scale, h),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn fd_grad(kind: &ConstraintKind, x: &[f64], eps: f64) -> Vec<f64> {
        let mut g = vec![0.0; x.len()];
        let mut xp = x.to_vec();
        for j in 0..x.len() {
            let h = eps * (1.0 + x[j].abs());
            xp[j] = x[j] + h;
            let fp = kind.value(&xp);
            xp[j] = x[j] - h;
            let fm = kind.value(&xp);
            xp[j] = x[j];
            g[j] = (fp - fm) / (2.0 * h);
        }
        g
    }

    fn dense_grad(kind: &ConstraintKind, x: &[f64]) -> Vec<f64> {
        let (mut idx, mut val) = (vec![], vec![]);
        kind.grad(x, &mut idx, &mut val);
        let mut g = vec![0.0; x.len()];
        for (i, v) in idx.iter().zip(&val) {
            g[*i] += v;
        }
        g
    }

    fn check_grad(kind: &ConstraintKind, x: &[f64]) {
        let fd = fd_grad(kind, x, 1e-6);
        let an = dense_grad(kind, x);
        for j in 0..x.len() {
            let scale = 1.0 + fd[j].abs().max(an[j].abs());
            assert!(
                (fd[j] - an[j]).abs() / scale < 1e-5,
                "grad[{j}]: fd={} analytic={}",
                fd[j],
                an[j]
            );
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        let x = vec![0.3, 0.7, 1.2, 0.4, 0.9, 0.2];
        check_grad(
            &ConstraintKind::Linear { terms: vec![(0, 2.0), (3, -1.5)], rhs: 1.0 },
            &x,
        );
        check_grad(
            &ConstraintKind::DiagQuad {
                quad: vec![(0, 1.0), (1, 3.0)],
                lin: vec![(2, -1.0)],
                rhs: 0.5,
            },
            &x,
        );
        check_grad(
            &ConstraintKind::ScaFronthaul {
                pairs: vec![
                    ScaPair { q: 0, r: 1, anchor_diff: -0.3 },
                    ScaPair { q: 2, r: 3, anchor_diff: 0.8 },
                ],
                constant: 0.73,
                rhs: 4.0,
            },
            &x,
        );
        let quads = vec![RankTwo::from_channel(
            2,
            &[Complex64::new(0.4, -0.2), Complex64::new(-0.1, 0.3)],
        )];
        check_grad(
            &ConstraintKind::FpResidual {
                gamma: 0,
                lin: vec![(1, -0.7)],
                usq: 1.3,
                noise: 0.9,
                quads,
            },
            &x,
        );
        check_grad(&ConstraintKind::LogRate { rate: 0, gamma: 1, bandwidth: 2.0 }, &x);
        check_grad(
            &ConstraintKind::Hyperbolic { f: 0, r: 1, a: 0.5, c: 0.25, rhs: 1.0 },
            &x,
        );
        check_grad(
            &ConstraintKind::PowerEc {
                w: vec![0, 1],
                f: vec![2, 3],
                coeff: 0.1,
                exponent: 3.0,
                rhs: 1.0,
            },
            &x,
        );
    }

    #[test]
    fn rank_two_matches_complex_inner_product() {
        let h = [Complex64::new(0.3, -0.5), Complex64::new(1.1, 0.2)];
        let w = [Complex64::new(-0.4, 0.9), Complex64::new(0.7, -0.3)];
        let rt = RankTwo::from_channel(0, &h);
        let x = vec![w[0].re, w[0].im, w[1].re, w[1].im];
        let inner: Complex64 = h.iter().zip(&w).map(|(a, b)| a.conj() * b).sum();
        let (re, im) = rt.dots(&x);
        assert!((re - inner.re).abs() < 1e-14);
        assert!((im - inner.im).abs() < 1e-14);
        assert!((rt.value(&x) - inner.norm_sqr()).abs() < 1e-14);
    }

    #[test]
    fn domain_violations_are_infinite() {
        let hyp = ConstraintKind::Hyperbolic { f: 0, r: 1, a: 1.0, c: 1.0, rhs: 10.0 };
        assert!(hyp.value(&[0.0, 1.0]).is_infinite());
        assert!(hyp.value(&[-1.0, 1.0]).is_infinite());
        let lr = ConstraintKind::LogRate { rate: 0, gamma: 1, bandwidth: 1.0 };
        assert!(lr.value(&[0.0, -1.5]).is_infinite());
    }

    #[test]
    fn hessian_is_symmetric_psd_on_samples() {
        let x = vec![0.4, 0.6, 0.8, 0.5];
        let kinds = vec![
            ConstraintKind::ScaFronthaul {
                pairs: vec![ScaPair { q: 0, r: 1, anchor_diff: 0.2 }],
                constant: 0.0,
                rhs: 1.0,
            },
            ConstraintKind::Hyperbolic { f: 0, r: 1, a: 1.0, c: 2.0, rhs: 9.0 },
            ConstraintKind::PowerEc {
                w: vec![0],
                f: vec![1, 2],
                coeff: 0.3,
                exponent: 3.0,
                rhs: 5.0,
            },
        ];
        for kind in kinds {
            let mut h = DMatrix::zeros(4, 4);
            kind.add_hess(&x, 1.0, &mut h);
            assert!((h.clone() - h.transpose()).norm() < 1e-12);
            let eig = h.symmetric_eigenvalues();
            assert!(eig.iter().all(|&l| l > -1e-10), "negative eigenvalue: {eig}");
        }
    }
}
