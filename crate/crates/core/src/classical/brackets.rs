//! Extended Poisson brackets of (at most quadratic) functionals on the
//! stacked lattice vector z = (phi sites, pi sites). The discrete bracket
//! carries a `1/(dt dx)` weight so functional-derivative formulas match the
//! continuum as the spacing shrinks.

use crate::error::{CoreError, Result};
use crate::kg::Foliation;
use crate::scalar::Real;

/// `F[z] = 1/2 z^T A z + b^T z + c` on a fixed (nt x nx) grid. The matrix is
/// kept exactly symmetric.
#[derive(Debug, Clone)]
pub struct QuadraticFunctional<R: Real> {
    pub nt: usize,
    pub nx: usize,
    pub dt: R,
    pub dx: R,
    /// Dense symmetric (2M x 2M) coefficient matrix, M = nt*nx.
    pub mat: Vec<R>,
    pub lin: Vec<R>,
    pub constant: R,
    pub label: String,
}

impl<R: Real> QuadraticFunctional<R> {
    pub fn zero(nt: usize, nx: usize, dt: R, dx: R, label: &str) -> Self {
        let m = 2 * nt * nx;
        QuadraticFunctional {
            nt,
            nx,
            dt,
            dx,
            mat: vec![R::zero(); m * m],
            lin: vec![R::zero(); m],
            constant: R::zero(),
            label: label.to_string(),
        }
    }

    pub fn sites(&self) -> usize {
        self.nt * self.nx
    }

    pub fn dim(&self) -> usize {
        2 * self.sites()
    }

    #[inline]
    pub fn phi_index(&self, it: usize, ix: usize) -> usize {
        it * self.nx + ix
    }

    #[inline]
    pub fn pi_index(&self, it: usize, ix: usize) -> usize {
        self.sites() + it * self.nx + ix
    }

    /// Add `w * z_a * z_b` to the quadratic form (symmetrized).
    pub fn add_quadratic(&mut self, a: usize, b: usize, w: R) {
        let d = self.dim();
        self.mat[a * d + b] += w;
        self.mat[b * d + a] += w;
    }

    pub fn add_linear(&mut self, a: usize, w: R) {
        self.lin[a] += w;
    }

    pub fn symmetry_residual(&self) -> R {
        let d = self.dim();
        let mut worst = R::zero();
        for i in 0..d {
            for j in 0..d {
                worst = worst.max((self.mat[i * d + j] - self.mat[j * d + i]).abs());
            }
        }
        worst
    }

    /// Evaluate the functional on a stacked configuration.
    pub fn eval(&self, z: &[R]) -> R {
        let d = self.dim();
        assert_eq!(z.len(), d);
        let mut quad = R::zero();
        for i in 0..d {
            let mut row = R::zero();
            for j in 0..d {
                row += self.mat[i * d + j] * z[j];
            }
            quad += z[i] * row;
        }
        let lin: R = self.lin.iter().zip(z).map(|(&a, &b)| a * b).sum();
        quad * R::of(0.5) + lin + self.constant
    }

    /// Gradient `A z + b`.
    pub fn gradient(&self, z: &[R]) -> Vec<R> {
        let d = self.dim();
        let mut g = self.lin.clone();
        for i in 0..d {
            let mut acc = R::zero();
            for j in 0..d {
                acc += self.mat[i * d + j] * z[j];
            }
            g[i] += acc;
        }
        g
    }

    /// Frobenius norm of all coefficients restricted to interior sites
    /// (time boundary rows excluded on both slots).
    pub fn interior_coefficient_norm(&self) -> R {
        let d = self.dim();
        let m = self.sites();
        let interior = |idx: usize| {
            let site = idx % m;
            let it = site / self.nx;
            it >= 1 && it + 1 < self.nt
        };
        let mut acc = R::zero();
        for i in (0..d).filter(|&i| interior(i)) {
            for j in (0..d).filter(|&j| interior(j)) {
                acc += self.mat[i * d + j] * self.mat[i * d + j];
            }
            acc += self.lin[i] * self.lin[i];
        }
        acc.sqrt()
    }
}

/// Extended Poisson bracket of two functionals on the same grid:
/// quadratic part `w (A J B - B J A)`, linear part `w (A J c - B J b)`,
/// constant `w b^T J c`, with `J` the symplectic pairing and
/// `w = 1/(dt dx)` the discrete-delta weight.
pub fn extended_pb<R: Real>(
    f: &QuadraticFunctional<R>,
    g: &QuadraticFunctional<R>,
) -> Result<QuadraticFunctional<R>> {
    if f.nt != g.nt || f.nx != g.nx {
        return Err(CoreError::ShapeMismatch("bracket of functionals on different grids".into()));
    }
    let m = f.sites();
    let d = f.dim();
    let w = (f.dt * f.dx).recip();
    // J z: (phi block, pi block) -> (pi block, -phi block).
    let apply_j = |v: &[R]| -> Vec<R> {
        let mut out = vec![R::zero(); d];
        for k in 0..m {
            out[k] = v[m + k];
            out[m + k] = -v[k];
        }
        out
    };
    // Column-wise: AJB column j = A * (J * (B e_j)).
    let mut out = QuadraticFunctional::zero(f.nt, f.nx, f.dt, f.dx, "bracket");
    out.label = format!("{{{}, {}}}", f.label, g.label);
    let matvec = |mat: &[R], v: &[R]| -> Vec<R> {
        let mut out = vec![R::zero(); d];
        for i in 0..d {
            let mut acc = R::zero();
            let row = &mat[i * d..(i + 1) * d];
            for (a, b) in row.iter().zip(v) {
                acc += *a * *b;
            }
            out[i] = acc;
        }
        out
    };
    // Dense products; grids stay small enough for the cubic cost.
    let mut ajb = vec![R::zero(); d * d];
    let mut bja = vec![R::zero(); d * d];
    for j in 0..d {
        let bcol: Vec<R> = (0..d).map(|i| g.mat[i * d + j]).collect();
        let col = matvec(&f.mat, &apply_j(&bcol));
        for i in 0..d {
            ajb[i * d + j] = col[i];
        }
        let acol: Vec<R> = (0..d).map(|i| f.mat[i * d + j]).collect();
        let col2 = matvec(&g.mat, &apply_j(&acol));
        for i in 0..d {
            bja[i * d + j] = col2[i];
        }
    }
    for i in 0..d {
        for j in 0..d {
            out.mat[i * d + j] = w * (ajb[i * d + j] - bja[i * d + j]);
        }
    }
    out.lin = {
        let ajc = matvec(&f.mat, &apply_j(&g.lin));
        let bjb = matvec(&g.mat, &apply_j(&f.lin));
        (0..d).map(|i| w * (ajc[i] - bjb[i])).collect()
    };
    let jc = apply_j(&g.lin);
    out.constant = w * f.lin.iter().zip(&jc).map(|(&a, &b)| a * b).sum::<R>();
    Ok(out)
}

/// Central-difference stencil of `n·d` acting on the phi block, with time
/// boundary rows dropped.
fn directional_stencil<R: Real>(
    qf: &QuadraticFunctional<R>,
    fol: &Foliation<R>,
) -> Vec<(usize, usize, R)> {
    // Entries (site_row, site_col, weight) of the interior difference matrix.
    let (nt, nx) = (qf.nt, qf.nx);
    let n = fol.n();
    let mut entries = Vec::new();
    for it in 1..nt - 1 {
        for ix in 0..nx {
            let row = it * nx + ix;
            let wt = n[0] / (R::of(2.0) * qf.dt);
            entries.push((row, (it + 1) * nx + ix, wt));
            entries.push((row, (it - 1) * nx + ix, -wt));
            let wx = n[1] / (R::of(2.0) * qf.dx);
            entries.push((row, it * nx + (ix + 1) % nx, wx));
            entries.push((row, it * nx + (ix + nx - 1) % nx, -wx));
        }
    }
    entries
}

/// Discretized time-translation generator `sum dt dx pi (n·d phi)`.
pub fn p0_functional<R: Real>(
    nt: usize,
    nx: usize,
    dt: R,
    dx: R,
    fol: &Foliation<R>,
) -> QuadraticFunctional<R> {
    let mut qf = QuadraticFunctional::zero(nt, nx, dt, dx, "P0");
    let measure = dt * dx;
    for (row, col, w) in directional_stencil(&qf.clone(), fol) {
        // A[pi_r][phi_c] = measure * w on both symmetric slots makes
        // 1/2 z^T A z reproduce sum_r measure * pi_r (n·d phi)_r exactly.
        let pi_idx = qf.sites() + row;
        qf.add_quadratic(pi_idx, col, measure * w);
    }
    qf
}

/// Discretized covariant Hamiltonian `sum dt dx H` for the free field.
pub fn hamiltonian_functional<R: Real>(
    nt: usize,
    nx: usize,
    dt: R,
    dx: R,
    fol: &Foliation<R>,
    mass: R,
) -> QuadraticFunctional<R> {
    let mut qf = QuadraticFunctional::zero(nt, nx, dt, dx, "H");
    let measure = dt * dx;
    let n = fol.n();
    let m = qf.sites();
    // pi^2 term.
    for it in 1..nt - 1 {
        for ix in 0..nx {
            let idx = m + it * nx + ix;
            qf.add_quadratic(idx, idx, measure * fol.norm_sq() * R::of(0.5));
        }
    }
    // Gradient terms: 1/2 [(n·dphi)^2/|n|^2 - (dt phi)^2 + (dx phi)^2].
    // add_outer implements F += c (sum_i w_i z_i)^2: passing c*wi*wj to
    // add_quadratic accumulates A[i][j] = 2 c w_i w_j over the double loop,
    // which is exactly the 1/2 z^T A z convention.
    let mut add_outer = |stencil: &[(usize, R)], c: R| {
        for &(i, wi) in stencil {
            for &(j, wj) in stencil {
                qf.add_quadratic(i, j, c * wi * wj);
            }
        }
    };
    for it in 1..nt - 1 {
        for ix in 0..nx {
            let tp = (it + 1) * nx + ix;
            let tm = (it - 1) * nx + ix;
            let xp = it * nx + (ix + 1) % nx;
            let xm = it * nx + (ix + nx - 1) % nx;
            let wt = (R::of(2.0) * dt).recip();
            let wx = (R::of(2.0) * dx).recip();
            let ndphi = vec![
                (tp, n[0] * wt),
                (tm, -n[0] * wt),
                (xp, n[1] * wx),
                (xm, -n[1] * wx),
            ];
            add_outer(&ndphi, measure * R::of(0.5) / fol.norm_sq());
            let dtphi = vec![(tp, wt), (tm, -wt)];
            add_outer(&dtphi, -measure * R::of(0.5));
            let dxphi = vec![(xp, wx), (xm, -wx)];
            add_outer(&dxphi, measure * R::of(0.5));
            let site = it * nx + ix;
            qf.add_quadratic(site, site, measure * mass * mass * R::of(0.5));
        }
    }
    qf
}

/// Free action functional `P0 - integral(H)`.
pub fn action_functional<R: Real>(
    nt: usize,
    nx: usize,
    dt: R,
    dx: R,
    fol: &Foliation<R>,
    mass: R,
) -> QuadraticFunctional<R> {
    let p0 = p0_functional(nt, nx, dt, dx, fol);
    let h = hamiltonian_functional(nt, nx, dt, dx, fol, mass);
    let mut out = p0;
    for (o, v) in out.mat.iter_mut().zip(&h.mat) {
        *o -= *v;
    }
    out.label = "S".into();
    out
}

/// Discretized Lorentz generator `sum dt dx pi (x_u d_v - x_v d_u) phi` for
/// the (0,1) plane, coordinates centered on the block.
pub fn lorentz_functional<R: Real>(
    nt: usize,
    nx: usize,
    dt: R,
    dx: R,
) -> QuadraticFunctional<R> {
    let mut qf = QuadraticFunctional::zero(nt, nx, dt, dx, "L01");
    let measure = dt * dx;
    let m = qf.sites();
    let t0 = R::of((nt as f64 - 1.0) / 2.0) * dt;
    let x0 = R::of((nx as f64 - 1.0) / 2.0) * dx;
    for it in 1..nt - 1 {
        for ix in 0..nx {
            let row = it * nx + ix;
            let pi_idx = m + row;
            let t = R::of(it as f64) * dt - t0;
            let x = R::of(ix as f64) * dx - x0;
            // x_0 d_1 - x_1 d_0 with lowered spatial coordinate: t d_x + x d_t.
            let wt = (R::of(2.0) * dt).recip();
            let wx = (R::of(2.0) * dx).recip();
            qf.add_quadratic(pi_idx, it * nx + (ix + 1) % nx, measure * t * wx);
            qf.add_quadratic(pi_idx, it * nx + (ix + nx - 1) % nx, -measure * t * wx);
            qf.add_quadratic(pi_idx, (it + 1) * nx + ix, measure * x * wt);
            qf.add_quadratic(pi_idx, (it - 1) * nx + ix, -measure * x * wt);
        }
    }
    qf
}

/// Linear evaluation functional `phi(site)` or `pi(site)`.
pub fn coordinate_functional<R: Real>(
    nt: usize,
    nx: usize,
    dt: R,
    dx: R,
    momentum: bool,
    it: usize,
    ix: usize,
) -> QuadraticFunctional<R> {
    let mut qf = QuadraticFunctional::zero(
        nt,
        nx,
        dt,
        dx,
        if momentum { "pi(site)" } else { "phi(site)" },
    );
    let idx = if momentum { qf.pi_index(it, ix) } else { qf.phi_index(it, ix) };
    qf.add_linear(idx, R::one());
    qf
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn tiny_random(nt: usize, nx: usize, seed: u64) -> QuadraticFunctional<f64> {
        let mut rng = crate::random::rng_from_seed(seed);
        let mut qf = QuadraticFunctional::zero(nt, nx, 0.1, 0.2, "rand");
        let d = qf.dim();
        for i in 0..d {
            for j in i..d {
                let w: f64 = rng.gen_range(-1.0..1.0);
                qf.add_quadratic(i, j, 0.5 * w);
            }
            qf.add_linear(i, rng.gen_range(-1.0..1.0));
        }
        qf
    }

    #[test]
    fn bracket_antisymmetry_and_self() {
        let f = tiny_random(2, 3, 1);
        let g = tiny_random(2, 3, 2);
        let fg = extended_pb(&f, &g).unwrap();
        let gf = extended_pb(&g, &f).unwrap();
        let d = f.dim();
        for i in 0..d * d {
            assert!((fg.mat[i] + gf.mat[i]).abs() < 1e-12);
        }
        let ff = extended_pb(&f, &f).unwrap();
        assert!(ff.mat.iter().all(|&x| x.abs() < 1e-12));
        assert!(ff.lin.iter().all(|&x| x.abs() < 1e-12));
        assert!(ff.symmetry_residual() < 1e-12);
    }

    #[test]
    fn canonical_pairs_give_discrete_delta() {
        let (nt, nx, dt, dx) = (3usize, 4usize, 0.1f64, 0.2f64);
        let phi = coordinate_functional(nt, nx, dt, dx, false, 1, 2);
        let pi_same = coordinate_functional(nt, nx, dt, dx, true, 1, 2);
        let pi_other = coordinate_functional(nt, nx, dt, dx, true, 1, 3);
        let b1 = extended_pb(&phi, &pi_same).unwrap();
        assert!((b1.constant - 1.0 / (dt * dx)).abs() < 1e-14);
        let b2 = extended_pb(&phi, &pi_other).unwrap();
        assert_eq!(b2.constant, 0.0);
    }

    #[test]
    fn jacobi_identity_for_quadratics() {
        let f = tiny_random(2, 2, 3);
        let g = tiny_random(2, 2, 4);
        let h = tiny_random(2, 2, 5);
        let t1 = extended_pb(&extended_pb(&f, &g).unwrap(), &h).unwrap();
        let t2 = extended_pb(&extended_pb(&g, &h).unwrap(), &f).unwrap();
        let t3 = extended_pb(&extended_pb(&h, &f).unwrap(), &g).unwrap();
        let d = f.dim();
        for i in 0..d * d {
            let s = t1.mat[i] + t2.mat[i] + t3.mat[i];
            assert!(s.abs() < 1e-10, "jacobi matrix residual {s}");
        }
        for i in 0..d {
            let s = t1.lin[i] + t2.lin[i] + t3.lin[i];
            assert!(s.abs() < 1e-10, "jacobi linear residual {s}");
        }
    }

    #[test]
    fn phi_bracket_p0_is_directional_derivative() {
        // {phi(site), P0} evaluated on a smooth configuration approximates
        // n·d phi at the site to second order.
        let fol = Foliation::new(vec![0.3f64.cosh(), 0.3f64.sinh()]).unwrap();
        let mut errs = Vec::new();
        for (nt, nx) in [(8usize, 8usize), (16, 16)] {
            let dt = 1.0 / nt as f64;
            let dx = 1.0 / nx as f64;
            let p0 = p0_functional(nt, nx, dt, dx, &fol);
            let site = (nt / 2, nx / 2);
            let phi_f = coordinate_functional(nt, nx, dt, dx, false, site.0, site.1);
            let bracket = extended_pb(&phi_f, &p0).unwrap();
            // Smooth test configuration phi = sin(2 pi x) cos(pi t) (periodic
            // in x), pi arbitrary (enters nowhere here).
            let mut z = vec![0.0f64; 2 * nt * nx];
            let f = |t: f64, x: f64| (2.0 * std::f64::consts::PI * x).sin() * (t).cos();
            for it in 0..nt {
                for ix in 0..nx {
                    z[it * nx + ix] = f(it as f64 * dt, ix as f64 * dx);
                }
            }
            let got = bracket.eval(&z);
            let (t, x) = (site.0 as f64 * dt, site.1 as f64 * dx);
            let dphidt = -(2.0 * std::f64::consts::PI * x).sin() * t.sin();
            let dphidx =
                2.0 * std::f64::consts::PI * (2.0 * std::f64::consts::PI * x).cos() * t.cos();
            let expect = fol.n()[0] * dphidt + fol.n()[1] * dphidx;
            errs.push((got - expect).abs());
        }
        let order = (errs[0] / errs[1]).log2();
        assert!((1.7..=2.3).contains(&order), "order {order} (errors {errs:?})");
    }

    #[test]
    fn action_lorentz_bracket_shrinks_with_refinement() {
        // The lattice breaks Lorentz symmetry at O(dx^2): the bracket of the
        // free action with the discretized generator, measured on interior
        // coefficients, decays under refinement.
        let fol = Foliation::<f64>::canonical(2);
        let mut norms = Vec::new();
        for (nt, nx) in [(6usize, 6usize), (12, 12)] {
            let dt = 1.0 / nt as f64;
            let dx = 1.0 / nx as f64;
            let s = action_functional(nt, nx, dt, dx, &fol, 1.0);
            let l = lorentz_functional(nt, nx, dt, dx);
            let b = extended_pb(&s, &l).unwrap();
            // Normalize by the measure-weighted size of S itself.
            let scale = s.interior_coefficient_norm().max(1e-30);
            norms.push(b.interior_coefficient_norm() / scale);
        }
        assert!(
            norms[1] < norms[0] * 0.5,
            "symmetry-breaking coefficients should shrink: {norms:?}"
        );
    }

    #[test]
    fn generator_flow_preserves_constraints_order() {
        // One Euler step of the Lorentz-generator flow applied to an on-shell
        // block leaves the constraint residual at the same order in dx.
        let fol = Foliation::<f64>::canonical(2);
        let mass = 1.0;
        let mut residuals = Vec::new();
        for (nt, nx) in [(12usize, 12usize), (24, 24)] {
            let l_box = 4.0;
            let dx = l_box / nx as f64;
            let dt = 0.5 * dx;
            let p1 = 2.0 * std::f64::consts::PI / l_box;
            let e = (p1 * p1 + mass * mass).sqrt();
            let mut z = vec![0.0f64; 2 * nt * nx];
            for it in 0..nt {
                for ix in 0..nx {
                    let s = p1 * ix as f64 * dx - e * it as f64 * dt;
                    z[it * nx + ix] = s.cos();
                    z[nt * nx + it * nx + ix] = e * s.sin();
                }
            }
            let lgen = lorentz_functional(nt, nx, dt, dx);
            let theta = 1e-3;
            // z' = z + theta * w * J grad L(z).
            let grad = lgen.gradient(&z);
            let m = nt * nx;
            let w = 1.0 / (dt * dx);
            let mut z2 = z.clone();
            for k in 0..m {
                z2[k] += theta * w * grad[m + k];
                z2[m + k] -= theta * w * grad[k];
            }
            // Constraint residual of the transformed configuration.
            let phi = Field2::from_fn(nt, nx, |it, ix| z2[it * nx + ix]);
            let pi = Field2::from_fn(nt, nx, |it, ix| z2[m + it * nx + ix]);
            let field = LatticeField::new(phi, pi, dt, dx, 0.0).unwrap();
            let (c_phi, c_pi) = crate::classical::physical_constraint_residual(&field, &fol, mass);
            let mut worst: f64 = 0.0;
            for it in 2..nt - 2 {
                for ix in 0..nx {
                    worst = worst.max(c_phi.get(it, ix).abs()).max(c_pi.get(it, ix).abs());
                }
            }
            residuals.push(worst);
        }
        let order = (residuals[0] / residuals[1]).log2();
        assert!(order > 1.5, "flowed block keeps O(dx^2) residuals: {residuals:?}");
    }
}
