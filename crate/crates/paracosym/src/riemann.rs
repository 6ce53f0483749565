//! Coordinate curvature oracle.
//!
//! Everything here is computed from the jets of the metric components only:
//! Christoffel symbols, the Riemann tensor with
//! `R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z`, Ricci as the trace
//! `Ric(X,Y) = Tr{Z ↦ R(Z,X)Y}`, scalar and Weyl curvature.
//!
//! Index layout: `gamma[a][b][c] = Γ^a_{bc}` with `∇_{∂b} ∂c = Γ^a_{bc} ∂a`;
//! `riemann[a][b][c][d] = R^a_{bcd}` with `R(∂c, ∂d)∂b = R^a_{bcd} ∂a`;
//! `rm[x][y][z][w] = g(R(∂x, ∂y)∂z, ∂w)`.

use thiserror::Error;

use crate::jets::{Jet, JetMatrix};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RiemannError {
    #[error("metric is singular at the point")]
    Singular,
    #[error("metric jets of order {have} given, order {need} required")]
    Order { have: usize, need: usize },
}

/// Flat index of a rank-`k` tensor in dimension `n`.
pub fn idx(n: usize, ix: &[usize]) -> usize {
    ix.iter().fold(0, |acc, &i| acc * n + i)
}

/// Position of a tensor slot for covariant differentiation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Up,
    Down,
}

/// Curvature data at one point.
#[derive(Clone, Debug)]
pub struct Curvature {
    pub n: usize,
    pub g: JetMatrix,
    pub ginv: JetMatrix,
    /// Number of positive and negative eigenvalues of `g`.
    pub signature: (usize, usize),
    pub gamma: Vec<Jet>,
    pub riemann: Vec<Jet>,
    pub rm: Vec<Jet>,
    pub ricci: Vec<Jet>,
    pub scalar: Jet,
    pub weyl: Vec<f64>,
}

impl Curvature {
    /// Levi-Civita data from metric jets; requires order at least 2.
    pub fn from_metric(g: &JetMatrix) -> Result<Curvature, RiemannError> {
        let n = g.n;
        let order = g.entries.iter().map(Jet::order).min().unwrap_or(0);
        if order < 2 {
            return Err(RiemannError::Order { have: order, need: 2 });
        }
        let ginv = g.inverse().ok_or(RiemannError::Singular)?;
        let vals = g.values();
        let eig = nalgebra::SymmetricEigen::new(nalgebra::DMatrix::from_fn(n, n, |i, j| vals[i][j]));
        let pos = eig.eigenvalues.iter().filter(|&&e| e > 0.0).count();
        let signature = (pos, n - pos);

        // Christoffel symbols of the first kind: [bc, d] = ½(∂_b g_dc + ∂_c g_db − ∂_d g_bc).
        let dg: Vec<Vec<Jet>> = (0..n).map(|k| g.entries.iter().map(|e| e.partial(k)).collect()).collect();
        let dgi = |k: usize, i: usize, j: usize| &dg[k][i * n + j];
        let mut first = Vec::with_capacity(n * n * n);
        for d in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let s = dgi(b, d, c) + dgi(c, d, b) - dgi(d, b, c);
                    first.push(s.scale(0.5));
                }
            }
        }
        let ginv_lo = JetMatrix::from_fn(n, |i, j| ginv.get(i, j).truncate(order - 1));
        let mut gamma = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let mut acc = Jet::zero(n, order - 1);
                    for d in 0..n {
                        acc += &(ginv_lo.get(a, d) * &first[idx(n, &[d, b, c])]);
                    }
                    gamma.push(acc);
                }
            }
        }

        let ro = order - 2;
        let gam_lo: Vec<Jet> = gamma.iter().map(|j| j.truncate(ro)).collect();
        let dgam: Vec<Vec<Jet>> = (0..n).map(|k| gamma.iter().map(|e| e.partial(k)).collect()).collect();
        let gm = |a: usize, b: usize, c: usize| &gam_lo[idx(n, &[a, b, c])];
        let mut riemann = Vec::with_capacity(n.pow(4));
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let mut acc = &dgam[c][idx(n, &[a, d, b])] - &dgam[d][idx(n, &[a, c, b])];
                        for e in 0..n {
                            acc += &(gm(a, c, e) * gm(e, d, b));
                            acc -= &(gm(a, d, e) * gm(e, c, b));
                        }
                        riemann.push(acc);
                    }
                }
            }
        }
        let g_lo = JetMatrix::from_fn(n, |i, j| g.get(i, j).truncate(ro));
        let mut rm = Vec::with_capacity(n.pow(4));
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for w in 0..n {
                        let mut acc = Jet::zero(n, ro);
                        for a in 0..n {
                            acc += &(g_lo.get(w, a) * &riemann[idx(n, &[a, z, x, y])]);
                        }
                        rm.push(acc);
                    }
                }
            }
        }
        let mut ricci = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let mut acc = Jet::zero(n, ro);
                for a in 0..n {
                    acc += &riemann[idx(n, &[a, y, a, x])];
                }
                ricci.push(acc);
            }
        }
        let mut scalar = Jet::zero(n, ro);
        for a in 0..n {
            for b in 0..n {
                scalar += &(ginv.get(a, b).truncate(ro) * &ricci[a * n + b]);
            }
        }
        let rm_vals: Vec<f64> = rm.iter().map(Jet::value).collect();
        let ric_vals: Vec<f64> = ricci.iter().map(Jet::value).collect();
        let g_vals: Vec<f64> = vals.iter().flatten().copied().collect();
        let weyl = weyl_tensor(n, &rm_vals, &ric_vals, scalar.value(), &g_vals);
        Ok(Curvature { n, g: g.clone(), ginv, signature, gamma, riemann, rm, ricci, scalar, weyl })
    }

    pub fn rm_values(&self) -> Vec<f64> {
        self.rm.iter().map(Jet::value).collect()
    }

    pub fn ricci_values(&self) -> Vec<f64> {
        self.ricci.iter().map(Jet::value).collect()
    }

    pub fn g_values(&self) -> Vec<f64> {
        self.g.entries.iter().map(Jet::value).collect()
    }

    pub fn max_abs_riemann(&self) -> f64 {
        self.rm.iter().fold(0.0, |m, j| m.max(j.value().abs()))
    }

    /// `Γ^a_{bc}` at the point.
    pub fn christoffel_values(&self) -> Vec<f64> {
        self.gamma.iter().map(Jet::value).collect()
    }

    /// Covariant derivative of a tensor field given by jets; the new
    /// derivative index is placed first.
    pub fn covariant(&self, t: &[Jet], slots: &[Slot]) -> Vec<Jet> {
        covariant(self.n, t, slots, &self.gamma)
    }

    /// Gradient of the scalar curvature at the point.
    pub fn scalar_gradient(&self) -> Vec<f64> {
        self.scalar.gradient()
    }

    /// Residuals of the algebraic symmetries: pair antisymmetry, pair
    /// exchange and the first Bianchi identity.
    pub fn symmetry_residuals(&self) -> (f64, f64, f64) {
        let n = self.n;
        let r = self.rm_values();
        let at = |x, y, z, w| r[idx(n, &[x, y, z, w])];
        let (mut anti, mut pair, mut bianchi) = (0.0f64, 0.0f64, 0.0f64);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for w in 0..n {
                        anti = anti.max((at(x, y, z, w) + at(y, x, z, w)).abs());
                        anti = anti.max((at(x, y, z, w) + at(x, y, w, z)).abs());
                        pair = pair.max((at(x, y, z, w) - at(z, w, x, y)).abs());
                        bianchi = bianchi.max((at(x, y, z, w) + at(y, z, x, w) + at(z, x, y, w)).abs());
                    }
                }
            }
        }
        (anti, pair, bianchi)
    }

    /// Max of the cyclic sum `(∇_e R)(x,y) + (∇_x R)(y,e) + (∇_y R)(e,x)`.
    pub fn second_bianchi_residual(&self) -> f64 {
        let n = self.n;
        let d = self.covariant(&self.rm, &[Slot::Down; 4]);
        let at = |e, x, y, z, w| d[idx(n, &[e, x, y, z, w])].value();
        let mut worst = 0.0f64;
        for e in 0..n {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        for w in 0..n {
                            let s = at(e, x, y, z, w) + at(x, y, e, z, w) + at(y, e, x, z, w);
                            worst = worst.max(s.abs());
                        }
                    }
                }
            }
        }
        worst
    }

    /// Weyl trace residual: `g^{xw} C_{xyzw}`.
    pub fn weyl_trace_residual(&self) -> f64 {
        let n = self.n;
        let gi: Vec<f64> = self.ginv.entries.iter().map(Jet::value).collect();
        let mut worst = 0.0f64;
        for y in 0..n {
            for z in 0..n {
                let mut s = 0.0;
                for x in 0..n {
                    for w in 0..n {
                        s += gi[x * n + w] * self.weyl[idx(n, &[x, y, z, w])];
                    }
                }
                worst = worst.max(s.abs());
            }
        }
        worst
    }
}

/// Covariant derivative of a tensor with the given slot pattern.
pub fn covariant(n: usize, t: &[Jet], slots: &[Slot], gamma: &[Jet]) -> Vec<Jet> {
    let k = slots.len();
    assert_eq!(t.len(), n.pow(k as u32));
    let mut out = Vec::with_capacity(n * t.len());
    let mut ix = vec![0usize; k];
    for c in 0..n {
        for flat in 0..t.len() {
            let mut rest = flat;
            for s in (0..k).rev() {
                ix[s] = rest % n;
                rest /= n;
            }
            let mut acc = t[flat].partial(c);
            for (s, slot) in slots.iter().enumerate() {
                let orig = ix[s];
                for e in 0..n {
                    ix[s] = e;
                    let te = &t[idx(n, &ix)];
                    match slot {
                        Slot::Up => acc += &(&gamma[idx(n, &[orig, c, e])] * te),
                        Slot::Down => acc -= &(&gamma[idx(n, &[e, c, orig])] * te),
                    }
                }
                ix[s] = orig;
            }
            out.push(acc);
        }
    }
    out
}

/// Kulkarni–Nomizu product of two symmetric 2-tensors (no ½ factor):
/// `(u∧v)(X,Y,Z,W) = u(Y,Z)v(X,W) − u(Y,W)v(X,Z) + v(Y,Z)u(X,W) − v(Y,W)u(X,Z)`.
pub fn kulkarni_nomizu(n: usize, u: &[f64], v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; n.pow(4)];
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for w in 0..n {
                    out[idx(n, &[x, y, z, w])] = u[y * n + z] * v[x * n + w] - u[y * n + w] * v[x * n + z]
                        + v[y * n + z] * u[x * n + w]
                        - v[y * n + w] * u[x * n + z];
                }
            }
        }
    }
    out
}

/// `C = R − (1/(n−2)) (Ric − r/(2(n−1)) g) ∧ g`.
pub fn weyl_tensor(n: usize, rm: &[f64], ric: &[f64], r: f64, g: &[f64]) -> Vec<f64> {
    let nf = n as f64;
    let schouten: Vec<f64> = ric.iter().zip(g).map(|(a, b)| a - r / (2.0 * (nf - 1.0)) * b).collect();
    let kn = kulkarni_nomizu(n, &schouten, g);
    rm.iter().zip(&kn).map(|(a, b)| a - b / (nf - 2.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere_metric(p: &[f64]) -> JetMatrix {
        // Round 2-sphere of radius 1 in (θ, φ), embedded as a 3-dim product
        // with a flat line to keep n = 3.
        let th = Jet::variable(3, 3, 0, p[0]);
        let s = th.sin();
        JetMatrix::from_fn(3, |i, j| match (i, j) {
            (0, 0) | (2, 2) => Jet::constant(3, 3, 1.0),
            (1, 1) => &s * &s,
            _ => Jet::zero(3, 3),
        })
    }

    #[test]
    fn sphere_has_unit_curvature() {
        let c = Curvature::from_metric(&sphere_metric(&[0.7, 0.2, 0.0])).unwrap();
        assert!((c.scalar.value() - 2.0).abs() < 1e-12);
        // Sectional curvature K = R(∂θ, ∂φ, ∂φ, ∂θ)/(g_θθ g_φφ) = 1.
        let sin2 = 0.7f64.sin().powi(2);
        let k = c.rm[idx(3, &[0, 1, 1, 0])].value() / sin2;
        assert!((k - 1.0).abs() < 1e-12);
        let (a, p, b) = c.symmetry_residuals();
        assert!(a < 1e-12 && p < 1e-12 && b < 1e-12);
    }

    #[test]
    fn metric_compatibility() {
        let c = Curvature::from_metric(&sphere_metric(&[0.4, 0.0, 0.0])).unwrap();
        let dg = c.covariant(&c.g.entries, &[Slot::Down, Slot::Down]);
        assert!(dg.iter().all(|j| j.value().abs() < 1e-14));
    }

    #[test]
    fn kn_of_metric_with_itself() {
        let n = 3;
        let g = [1.0, 0.2, 0.0, 0.2, -1.0, 0.3, 0.0, 0.3, 2.0];
        let kn = kulkarni_nomizu(n, &g, &g);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for w in 0..n {
                        let e = 2.0 * (g[y * n + z] * g[x * n + w] - g[y * n + w] * g[x * n + z]);
                        assert!((kn[idx(n, &[x, y, z, w])] - e).abs() < 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn singular_metric_is_rejected() {
        let m = JetMatrix::from_fn(2, |_, _| Jet::constant(2, 2, 1.0));
        assert!(matches!(Curvature::from_metric(&m), Err(RiemannError::Singular)));
    }
}
