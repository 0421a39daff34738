//! Real scalar field data on a uniform (Nt x Nx) grid, periodic in x and
//! open in t, with the covariant Hamiltonian machinery for a general
//! timelike foliation. The quartic self-coupling `V(phi) = lambda phi^4/4!`
//! is the only potential wired in.

use crate::error::{CoreError, Result};
use crate::kg::{BoostMatrix, Foliation};
use crate::scalar::Real;

/// Plain real-valued grid, row-major over (it, ix).
#[derive(Debug, Clone)]
pub struct Field2<R: Real> {
    pub nt: usize,
    pub nx: usize,
    data: Vec<R>,
}

impl<R: Real> Field2<R> {
    pub fn zeros(nt: usize, nx: usize) -> Self {
        Field2 { nt, nx, data: vec![R::zero(); nt * nx] }
    }

    pub fn from_fn(nt: usize, nx: usize, f: impl Fn(usize, usize) -> R) -> Self {
        let mut g = Self::zeros(nt, nx);
        for it in 0..nt {
            for ix in 0..nx {
                g.data[it * nx + ix] = f(it, ix);
            }
        }
        g
    }

    #[inline]
    pub fn get(&self, it: usize, ix: usize) -> R {
        self.data[it * self.nx + ix]
    }

    #[inline]
    pub fn set(&mut self, it: usize, ix: usize, v: R) {
        self.data[it * self.nx + ix] = v;
    }

    /// Periodic access in x.
    #[inline]
    pub fn getp(&self, it: usize, ix: isize) -> R {
        let nx = self.nx as isize;
        let ix = ((ix % nx) + nx) % nx;
        self.data[it * self.nx + ix as usize]
    }

    pub fn max_abs(&self) -> R {
        self.data.iter().fold(R::zero(), |a, &b| a.max(b.abs()))
    }

    pub fn data(&self) -> &[R] {
        &self.data
    }
}

/// Field and momentum on a grid with spacings and optional quartic coupling.
#[derive(Debug, Clone)]
pub struct LatticeField<R: Real> {
    pub phi: Field2<R>,
    pub pi: Field2<R>,
    pub dt: R,
    pub dx: R,
    pub lambda_pot: R,
}

impl<R: Real> LatticeField<R> {
    pub fn new(phi: Field2<R>, pi: Field2<R>, dt: R, dx: R, lambda_pot: R) -> Result<Self> {
        if phi.nt != pi.nt || phi.nx != pi.nx {
            return Err(CoreError::ShapeMismatch("phi and pi grids differ".into()));
        }
        if !(dt > R::zero() && dx > R::zero()) {
            return Err(CoreError::InvalidInput("spacings must be positive".into()));
        }
        Ok(LatticeField { phi, pi, dt, dx, lambda_pot })
    }

    pub fn interior(&self, it: usize) -> bool {
        it >= 1 && it + 1 < self.phi.nt
    }

    fn dphi_dt(&self, it: usize, ix: usize) -> R {
        (self.phi.get(it + 1, ix) - self.phi.get(it - 1, ix)) / (R::of(2.0) * self.dt)
    }

    fn dphi_dx(&self, it: usize, ix: usize) -> R {
        (self.phi.getp(it, ix as isize + 1) - self.phi.getp(it, ix as isize - 1))
            / (R::of(2.0) * self.dx)
    }

    fn dpi_dt(&self, it: usize, ix: usize) -> R {
        (self.pi.get(it + 1, ix) - self.pi.get(it - 1, ix)) / (R::of(2.0) * self.dt)
    }

    fn dpi_dx(&self, it: usize, ix: usize) -> R {
        (self.pi.getp(it, ix as isize + 1) - self.pi.getp(it, ix as isize - 1))
            / (R::of(2.0) * self.dx)
    }

    fn d2phi_tt(&self, it: usize, ix: usize) -> R {
        (self.phi.get(it + 1, ix) - R::of(2.0) * self.phi.get(it, ix) + self.phi.get(it - 1, ix))
            / (self.dt * self.dt)
    }

    fn d2phi_xx(&self, it: usize, ix: usize) -> R {
        (self.phi.getp(it, ix as isize + 1) - R::of(2.0) * self.phi.get(it, ix)
            + self.phi.getp(it, ix as isize - 1))
            / (self.dx * self.dx)
    }

    fn d2phi_tx(&self, it: usize, ix: usize) -> R {
        (self.phi.getp(it + 1, ix as isize + 1) - self.phi.getp(it + 1, ix as isize - 1)
            - self.phi.getp(it - 1, ix as isize + 1)
            + self.phi.getp(it - 1, ix as isize - 1))
            / (R::of(4.0) * self.dt * self.dx)
    }
}

/// Covariant Hamiltonian density at an interior grid point:
/// `|n|^2 pi^2/2 + ((n·dphi)^2/|n|^2 - dphi·dphi)/2 + m^2 phi^2/2 + V(phi)`.
pub fn hamiltonian_density<R: Real>(
    field: &LatticeField<R>,
    fol: &Foliation<R>,
    mass: R,
    at: (usize, usize),
) -> Result<R> {
    let (it, ix) = at;
    if !field.interior(it) {
        return Err(CoreError::InvalidInput(format!(
            "time index {it} is a boundary point; central stencils need neighbors"
        )));
    }
    let phi = field.phi.get(it, ix);
    let pi = field.pi.get(it, ix);
    let gt = field.dphi_dt(it, ix);
    let gx = field.dphi_dx(it, ix);
    let n = fol.n();
    let ndphi = n[0] * gt + n[1] * gx;
    let grad_sq = gt * gt - gx * gx;
    let half = R::of(0.5);
    let quartic = field.lambda_pot * phi.powi(4) / R::of(24.0);
    Ok(half * fol.norm_sq() * pi * pi + half * (ndphi * ndphi / fol.norm_sq() - grad_sq)
        + half * mass * mass * phi * phi
        + quartic)
}

/// Contraction `n_u n_v T^{uv} / |n|^2` with the stress tensor assembled
/// directly from the field gradients (momentum eliminated on shell). An
/// independent route to the same scalar as [`hamiltonian_density`].
pub fn stress_contraction<R: Real>(
    field: &LatticeField<R>,
    fol: &Foliation<R>,
    mass: R,
    at: (usize, usize),
) -> Result<R> {
    let (it, ix) = at;
    if !field.interior(it) {
        return Err(CoreError::InvalidInput("boundary point".into()));
    }
    let phi = field.phi.get(it, ix);
    let gt = field.dphi_dt(it, ix);
    let gx = field.dphi_dx(it, ix);
    let n = fol.n();
    let ndphi = n[0] * gt + n[1] * gx;
    let lagr = R::of(0.5) * (gt * gt - gx * gx)
        - R::of(0.5) * mass * mass * phi * phi
        - field.lambda_pot * phi.powi(4) / R::of(24.0);
    Ok((ndphi * ndphi - fol.norm_sq() * lagr) / fol.norm_sq())
}

/// Right-hand sides of the covariant Hamilton equations on interior points:
/// `n·dpi = (n^u n^v/|n|^2 - eta^{uv}) d_u d_v phi - m^2 phi - V'(phi)` and
/// `n·dphi = |n|^2 pi`. Boundary rows are left at zero.
pub fn hamilton_rhs<R: Real>(
    field: &LatticeField<R>,
    fol: &Foliation<R>,
    mass: R,
) -> (Field2<R>, Field2<R>) {
    let (nt, nx) = (field.phi.nt, field.phi.nx);
    let mut rhs_phi = Field2::zeros(nt, nx);
    let mut rhs_pi = Field2::zeros(nt, nx);
    let n = fol.n();
    for it in 1..nt.saturating_sub(1) {
        for ix in 0..nx {
            let phi = field.phi.get(it, ix);
            let proj = (n[0] * n[0] * field.d2phi_tt(it, ix)
                + R::of(2.0) * n[0] * n[1] * field.d2phi_tx(it, ix)
                + n[1] * n[1] * field.d2phi_xx(it, ix))
                / fol.norm_sq()
                - (field.d2phi_tt(it, ix) - field.d2phi_xx(it, ix));
            let vprime = field.lambda_pot * phi.powi(3) / R::of(6.0);
            rhs_pi.set(it, ix, proj - mass * mass * phi - vprime);
            rhs_phi.set(it, ix, fol.norm_sq() * field.pi.get(it, ix));
        }
    }
    (rhs_phi, rhs_pi)
}

/// Constraint fields `{phi, S} = n·dphi - |n|^2 pi` and
/// `{pi, S} = n·dpi - (projector dd phi - m^2 phi - V')`, evaluated from the
/// stored block. Near zero on solutions, order one away from them.
pub fn physical_constraint_residual<R: Real>(
    field: &LatticeField<R>,
    fol: &Foliation<R>,
    mass: R,
) -> (Field2<R>, Field2<R>) {
    let (nt, nx) = (field.phi.nt, field.phi.nx);
    let mut c_phi = Field2::zeros(nt, nx);
    let mut c_pi = Field2::zeros(nt, nx);
    let (rhs_phi, rhs_pi) = hamilton_rhs(field, fol, mass);
    let n = fol.n();
    for it in 1..nt.saturating_sub(1) {
        for ix in 0..nx {
            let ndphi = n[0] * field.dphi_dt(it, ix) + n[1] * field.dphi_dx(it, ix);
            let ndpi = n[0] * field.dpi_dt(it, ix) + n[1] * field.dpi_dx(it, ix);
            c_phi.set(it, ix, ndphi - rhs_phi.get(it, ix));
            c_pi.set(it, ix, ndpi - rhs_pi.get(it, ix));
        }
    }
    (c_phi, c_pi)
}

/// Leapfrog (kick-drift-kick) evolution along the foliation direction from
/// initial data on the grid's first row. The grid is axis-aligned with the
/// foliation rest frame, so only `|n|` enters the update; boosted setups are
/// compared through transformed analytic data, not tilted stencils.
pub fn evolve_along_n<R: Real>(
    phi0: &[R],
    pi0: &[R],
    fol: &Foliation<R>,
    mass: R,
    lambda_pot: R,
    steps: usize,
    dt: R,
    dx: R,
) -> Result<LatticeField<R>> {
    if phi0.len() != pi0.len() || phi0.is_empty() {
        return Err(CoreError::ShapeMismatch("initial rows must match".into()));
    }
    let nx = phi0.len();
    let nt = steps + 1;
    let mut phi = Field2::zeros(nt, nx);
    let mut pi = Field2::zeros(nt, nx);
    for ix in 0..nx {
        phi.set(0, ix, phi0[ix]);
        pi.set(0, ix, pi0[ix]);
    }
    // In the rest frame of n the equations read
    //   d_t phi = |n| pi,  d_t pi = (dxx phi - m^2 phi - V'(phi)) / |n|.
    let norm = fol.norm();
    let growth_limit = R::of(1e3);
    let scale0 = phi0.iter().fold(R::zero(), |a, &b| a.max(b.abs())).max(R::one());
    let force = |row_phi: &[R]| -> Vec<R> {
        let mut out = vec![R::zero(); nx];
        for ix in 0..nx {
            let left = row_phi[(ix + nx - 1) % nx];
            let right = row_phi[(ix + 1) % nx];
            let lap = (right - R::of(2.0) * row_phi[ix] + left) / (dx * dx);
            let vprime = lambda_pot * row_phi[ix].powi(3) / R::of(6.0);
            out[ix] = (lap - mass * mass * row_phi[ix] - vprime) / norm;
        }
        out
    };
    let mut cur_phi: Vec<R> = phi0.to_vec();
    let mut cur_pi: Vec<R> = pi0.to_vec();
    for step in 1..=steps {
        let f = force(&cur_phi);
        let half = R::of(0.5) * dt;
        let mut pi_half: Vec<R> = cur_pi.iter().zip(&f).map(|(&p, &f)| p + half * f).collect();
        for ix in 0..nx {
            cur_phi[ix] += dt * norm * pi_half[ix];
        }
        let f2 = force(&cur_phi);
        for ix in 0..nx {
            pi_half[ix] += half * f2[ix];
        }
        cur_pi = pi_half;
        for ix in 0..nx {
            phi.set(step, ix, cur_phi[ix]);
            pi.set(step, ix, cur_pi[ix]);
        }
        let peak = cur_phi.iter().fold(R::zero(), |a, &b| a.max(b.abs()));
        if peak > growth_limit * scale0 {
            return Err(CoreError::Instability {
                growth: (peak / scale0).as_f64(),
                limit: growth_limit.as_f64(),
            });
        }
    }
    LatticeField::new(phi, pi, dt, dx, lambda_pot)
}

/// Max deviation of the Hamiltonian density under an active Lorentz
/// transformation: `H[phi, pi, n](x)` against `H[phi', pi', Ln](Lx)` with the
/// primed fields sampled by bilinear interpolation of the original block.
pub fn scalar_covariance_check<R: Real>(
    field: &LatticeField<R>,
    boost: &BoostMatrix<R>,
    fol: &Foliation<R>,
    mass: R,
    probes: &[(usize, usize)],
) -> Result<R> {
    let fol_b = fol.boosted(boost)?;
    let inv = boost.inverse();
    let mut worst = R::zero();
    for &(it, ix) in probes {
        let direct = hamiltonian_density(field, fol, mass, (it, ix))?;
        // Coordinates of the probe, boosted forward.
        let x = [R::of(it as f64) * field.dt, R::of(ix as f64) * field.dx];
        let xb = boost.apply(&x);
        // Transformed fields sampled on a local stencil around Lx via the
        // inverse map; spacing matches the grid for a like-for-like stencil.
        let sample_phi = |p: &[R; 2]| -> Result<R> {
            let back = inv.apply(p);
            bilinear(&field.phi, back[0] / field.dt, back[1] / field.dx, field.phi.nx)
        };
        let sample_pi = |p: &[R; 2]| -> Result<R> {
            let back = inv.apply(p);
            bilinear(&field.pi, back[0] / field.dt, back[1] / field.dx, field.pi.nx)
        };
        let (ht, hx) = (field.dt, field.dx);
        let phi_c = sample_phi(&[xb[0], xb[1]])?;
        let pi_c = sample_pi(&[xb[0], xb[1]])?;
        let gt = (sample_phi(&[xb[0] + ht, xb[1]])? - sample_phi(&[xb[0] - ht, xb[1]])?)
            / (R::of(2.0) * ht);
        let gx = (sample_phi(&[xb[0], xb[1] + hx])? - sample_phi(&[xb[0], xb[1] - hx])?)
            / (R::of(2.0) * hx);
        let nb = fol_b.n();
        let ndphi = nb[0] * gt + nb[1] * gx;
        let half = R::of(0.5);
        let quartic = field.lambda_pot * phi_c.powi(4) / R::of(24.0);
        let transformed = half * fol_b.norm_sq() * pi_c * pi_c
            + half * (ndphi * ndphi / fol_b.norm_sq() - (gt * gt - gx * gx))
            + half * mass * mass * phi_c * phi_c
            + quartic;
        worst = worst.max((direct - transformed).abs());
    }
    Ok(worst)
}

fn bilinear<R: Real>(grid: &Field2<R>, t: R, x: R, nx: usize) -> Result<R> {
    let t0 = t.floor();
    let x0 = x.floor();
    let it = t0.as_f64() as isize;
    let ix = x0.as_f64() as isize;
    if it < 0 || (it + 1) as usize >= grid.nt {
        return Err(CoreError::InvalidInput(
            "probe leaves the evolved block after the boost".into(),
        ));
    }
    let ft = t - t0;
    let fx = x - x0;
    let one = R::one();
    let v00 = grid.getp(it as usize, ix);
    let v01 = grid.getp(it as usize, ix + 1);
    let v10 = grid.getp(it as usize + 1, ix);
    let v11 = grid.getp(it as usize + 1, ix + 1);
    let _ = nx;
    Ok(v00 * (one - ft) * (one - fx) + v01 * (one - ft) * fx + v10 * ft * (one - fx) + v11 * ft * fx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane_wave_block(
        nt: usize,
        nx: usize,
        dt: f64,
        dx: f64,
        mass: f64,
        k_mode: usize,
        fol: &Foliation<f64>,
    ) -> LatticeField<f64> {
        // Periodic-commensurate momentum and on-shell frequency.
        let l = nx as f64 * dx;
        let p1 = 2.0 * std::f64::consts::PI * k_mode as f64 / l;
        let e = (p1 * p1 + mass * mass).sqrt();
        let phi = Field2::from_fn(nt, nx, |it, ix| {
            let (t, x) = (it as f64 * dt, ix as f64 * dx);
            (p1 * x - e * t).cos()
        });
        let n = fol.n();
        let pi = Field2::from_fn(nt, nx, |it, ix| {
            let (t, x) = (it as f64 * dt, ix as f64 * dx);
            let s = p1 * x - e * t;
            // n·dphi / |n|^2 for the analytic wave.
            (n[0] * (e * s.sin()) + n[1] * (-p1 * s.sin())) / fol.norm_sq()
        });
        LatticeField::new(phi, pi, dt, dx, 0.0).unwrap()
    }

    #[test]
    fn constant_field_density_is_mass_term() {
        for fol in [
            Foliation::<f64>::canonical(2),
            Foliation::new(vec![1.3f64.cosh(), 1.3f64.sinh()]).unwrap(),
        ] {
            let phi = Field2::from_fn(6, 8, |_, _| 2.0);
            let pi = Field2::zeros(6, 8);
            let f = LatticeField::new(phi, pi, 0.1, 0.1, 0.0).unwrap();
            let h = hamiltonian_density(&f, &fol, 1.5, (2, 3)).unwrap();
            assert!((h - 0.5 * 1.5 * 1.5 * 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn canonical_density_matches_textbook() {
        let fol = Foliation::<f64>::canonical(2);
        let field = plane_wave_block(16, 32, 0.05, 0.1, 1.0, 2, &fol);
        for ix in 0..8 {
            let h = hamiltonian_density(&field, &fol, 1.0, (5, ix)).unwrap();
            let pi = field.pi.get(5, ix);
            let gx = (field.phi.getp(5, ix as isize + 1) - field.phi.getp(5, ix as isize - 1))
                / 0.2;
            let phi = field.phi.get(5, ix);
            let textbook = 0.5 * pi * pi + 0.5 * gx * gx + 0.5 * phi * phi;
            assert!((h - textbook).abs() < 1e-12, "ix={ix}: {h} vs {textbook}");
        }
    }

    #[test]
    fn density_positive_for_random_fields() {
        let mut seed = 123u64;
        let mut rand = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 33) as f64 / (1u64 << 31) as f64) - 1.0
        };
        let phi = Field2::from_fn(8, 8, |_, _| rand());
        let pi = Field2::from_fn(8, 8, |_, _| rand());
        let field = LatticeField::new(phi, pi, 0.1, 0.1, 0.0).unwrap();
        let fol = Foliation::new(vec![0.8f64.cosh(), 0.8f64.sinh()]).unwrap();
        for it in 1..7 {
            for ix in 0..8 {
                let h = hamiltonian_density(&field, &fol, 1.0, (it, ix)).unwrap();
                assert!(h >= -1e-12, "density must be positive, got {h}");
            }
        }
    }

    #[test]
    fn boundary_points_rejected() {
        let fol = Foliation::<f64>::canonical(2);
        let field = plane_wave_block(6, 8, 0.1, 0.1, 1.0, 1, &fol);
        assert!(hamiltonian_density(&field, &fol, 1.0, (0, 3)).is_err());
        assert!(hamiltonian_density(&field, &fol, 1.0, (5, 3)).is_err());
    }

    fn constraint_peak(field: &LatticeField<f64>, fol: &Foliation<f64>, mass: f64) -> f64 {
        let (c_phi, c_pi) = physical_constraint_residual(field, fol, mass);
        let mut worst: f64 = 0.0;
        for it in 1..field.phi.nt - 1 {
            for ix in 0..field.phi.nx {
                worst = worst.max(c_phi.get(it, ix).abs()).max(c_pi.get(it, ix).abs());
            }
        }
        worst
    }

    #[test]
    fn plane_wave_residual_second_order() {
        for eta in [0.0f64, 0.4] {
            let fol = Foliation::new(vec![eta.cosh(), eta.sinh()]).unwrap();
            // Same physical wave (box length 4, first mode) on two grids.
            let coarse = plane_wave_block(12, 16, 0.08, 0.25, 1.0, 1, &fol);
            let fine = plane_wave_block(24, 32, 0.04, 0.125, 1.0, 1, &fol);
            let r_coarse = constraint_peak(&coarse, &fol, 1.0);
            let r_fine = constraint_peak(&fine, &fol, 1.0);
            let order = (r_coarse / r_fine).log2();
            assert!(
                (1.9..=2.1).contains(&order),
                "eta={eta}: order {order} from {r_coarse} -> {r_fine}"
            );
        }
    }

    #[test]
    fn static_zero_solution() {
        let fol = Foliation::<f64>::canonical(2);
        let field = LatticeField::new(Field2::zeros(6, 8), Field2::zeros(6, 8), 0.1, 0.1, 0.0)
            .unwrap();
        let (rhs_phi, rhs_pi) = hamilton_rhs(&field, &fol, 1.0);
        assert_eq!(rhs_phi.max_abs(), 0.0);
        assert_eq!(rhs_pi.max_abs(), 0.0);
    }

    #[test]
    fn random_field_violates_constraints() {
        let fol = Foliation::<f64>::canonical(2);
        let phi = Field2::from_fn(8, 8, |it, ix| ((it * 7 + ix * 13) % 5) as f64 - 2.0);
        let pi = Field2::zeros(8, 8);
        let field = LatticeField::new(phi, pi, 0.1, 0.1, 0.0).unwrap();
        assert!(constraint_peak(&field, &fol, 1.0) > 0.1);
    }

    #[test]
    fn evolution_matches_analytic_wave_second_order() {
        let fol = Foliation::<f64>::canonical(2);
        let mass = 1.0;
        let mut errs = Vec::new();
        for (nx, steps) in [(16usize, 20usize), (32, 40)] {
            let l = 8.0;
            let dx = l / nx as f64;
            let dt = 0.4 * dx;
            let p1 = 2.0 * std::f64::consts::PI / l;
            let e = (p1 * p1 + mass * mass).sqrt();
            let phi0: Vec<f64> = (0..nx).map(|ix| (p1 * ix as f64 * dx).cos()).collect();
            let pi0: Vec<f64> = (0..nx).map(|ix| e * (p1 * ix as f64 * dx).sin()).collect();
            let block = evolve_along_n(&phi0, &pi0, &fol, mass, 0.0, steps, dt, dx).unwrap();
            let mut worst: f64 = 0.0;
            let t_final = steps as f64 * dt;
            for ix in 0..nx {
                let exact = (p1 * ix as f64 * dx - e * t_final).cos();
                worst = worst.max((block.phi.get(steps, ix) - exact).abs());
            }
            errs.push(worst);
        }
        let order = (errs[0] / errs[1]).log2();
        assert!((1.8..=2.3).contains(&order), "L-inf order {order} ({errs:?})");
    }

    #[test]
    fn zero_data_stays_zero() {
        let fol = Foliation::<f64>::canonical(2);
        let block = evolve_along_n(&vec![0.0; 8], &vec![0.0; 8], &fol, 1.0, 0.1, 10, 0.05, 0.1)
            .unwrap();
        assert_eq!(block.phi.max_abs(), 0.0);
    }

    #[test]
    fn energy_conserved_along_evolution() {
        let fol = Foliation::<f64>::canonical(2);
        let nx = 32;
        let l = 8.0;
        let dx = l / nx as f64;
        let dt = 0.3 * dx;
        let p1 = 2.0 * std::f64::consts::PI / l;
        let e = (p1 * p1 + 1.0).sqrt();
        let phi0: Vec<f64> = (0..nx).map(|ix| (p1 * ix as f64 * dx).cos()).collect();
        let pi0: Vec<f64> = (0..nx).map(|ix| e * (p1 * ix as f64 * dx).sin()).collect();
        let steps = 60;
        let block = evolve_along_n(&phi0, &pi0, &fol, 1.0, 0.0, steps, dt, dx).unwrap();
        let energy = |it: usize| -> f64 {
            let mut acc = 0.0;
            for ix in 0..nx {
                let pi = block.pi.get(it, ix);
                let gx = (block.phi.getp(it, ix as isize + 1)
                    - block.phi.getp(it, ix as isize - 1))
                    / (2.0 * dx);
                let phi = block.phi.get(it, ix);
                acc += dx * (0.5 * pi * pi + 0.5 * gx * gx + 0.5 * phi * phi);
            }
            acc
        };
        let e0 = energy(1);
        let mut drift: f64 = 0.0;
        for it in 2..steps {
            drift = drift.max((energy(it) - e0).abs() / e0);
        }
        assert!(drift < 5e-3, "relative energy drift {drift}");
    }

    #[test]
    fn instability_detected() {
        let fol = Foliation::<f64>::canonical(2);
        // dt >> dx violates the stability bound.
        let nx = 16;
        let phi0: Vec<f64> = (0..nx).map(|ix| (ix as f64 * 0.3).sin()).collect();
        let pi0 = vec![0.0; nx];
        let out = evolve_along_n(&phi0, &pi0, &fol, 1.0, 0.0, 400, 0.5, 0.05);
        assert!(matches!(out, Err(CoreError::Instability { .. })));
    }

    #[test]
    fn covariance_identity_boost_is_exact() {
        let fol = Foliation::<f64>::canonical(2);
        let field = plane_wave_block(20, 32, 0.05, 0.25, 1.0, 1, &fol);
        let probes: Vec<(usize, usize)> = (8..12).map(|it| (it, 16)).collect();
        let dev = scalar_covariance_check(
            &field,
            &BoostMatrix::identity(2),
            &fol,
            1.0,
            &probes,
        )
        .unwrap();
        assert!(dev < 1e-12, "identity-boost deviation {dev}");
    }

    #[test]
    fn covariance_deviation_shrinks_with_resolution() {
        let fol = Foliation::<f64>::canonical(2);
        let boost = BoostMatrix::boost(2, 1, 0.3);
        let mut devs = Vec::new();
        for (nt, nx) in [(24usize, 16usize), (48, 32)] {
            let dt = 1.2 / nt as f64;
            let dx = 4.0 / nx as f64;
            let field = plane_wave_block(nt, nx, dt, dx, 1.0, 1, &fol);
            let probes = vec![(nt / 2, nx / 2), (nt / 2, nx / 4), (nt / 2 + 2, nx / 2)];
            devs.push(scalar_covariance_check(&field, &boost, &fol, 1.0, &probes).unwrap());
        }
        assert!(
            devs[1] * 4.0 <= devs[0] * 1.35,
            "interpolation error should shrink ~4x: {devs:?}"
        );
    }

    #[test]
    fn stress_contraction_agrees_on_shell() {
        for eta in [0.0f64, 0.5] {
            let fol = Foliation::new(vec![eta.cosh(), eta.sinh()]).unwrap();
            let mut worst: f64 = 0.0;
            for (nt, nx) in [(16usize, 16usize), (32, 32)] {
                let dt = 0.8 / nt as f64;
                let dx = 4.0 / nx as f64;
                let field = plane_wave_block(nt, nx, dt, dx, 1.0, 1, &fol);
                let mut dev: f64 = 0.0;
                for ix in 0..nx {
                    let a = hamiltonian_density(&field, &fol, 1.0, (nt / 2, ix)).unwrap();
                    let b = stress_contraction(&field, &fol, 1.0, (nt / 2, ix)).unwrap();
                    dev = dev.max((a - b).abs());
                }
                if worst > 0.0 {
                    assert!(dev * 3.0 < worst, "second order in the spacing: {worst} -> {dev}");
                }
                worst = dev;
            }
        }
    }
}
