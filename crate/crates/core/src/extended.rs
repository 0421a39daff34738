//! Discrete extended Hilbert space: time slices as tensor factors, the
//! cyclic-shift operator that implements geometric time translation, slice
//! embeddings, and the discrete action operators `e^{iS}` built from them.
//!
//! Factor ordering convention: slice 1 is the most significant (leftmost)
//! tensor factor; an optional foliation register sits rightmost. The shift
//! moves slice contents forward: on three slices `|n1 n2 n3> -> |n3 n1 n2>`,
//! so the state that sat at slice 1 reappears at slice 2.

use crate::error::{CoreError, Result};
use crate::linalg::{matrix_exp, tensor_product, MultiIndex, Operator};
use crate::numeric::Policy;
use crate::scalar::{ci, cr, Real};

/// Descriptor for the extended space `h^{⊗N} (⊗ C^K)`.
#[derive(Debug, Clone)]
pub struct ExtendedSpace<R: Real> {
    local_dim: usize,
    slices: usize,
    foliation_dim: usize,
    step: R,
    dim_cap: usize,
}

impl<R: Real> ExtendedSpace<R> {
    pub fn new(local_dim: usize, slices: usize, step: R) -> Result<Self> {
        Self::with_foliation(local_dim, slices, 1, step)
    }

    pub fn with_foliation(
        local_dim: usize,
        slices: usize,
        foliation_dim: usize,
        step: R,
    ) -> Result<Self> {
        Self::with_policy(local_dim, slices, foliation_dim, step, &Policy::default())
    }

    pub fn with_policy(
        local_dim: usize,
        slices: usize,
        foliation_dim: usize,
        step: R,
        policy: &Policy<R>,
    ) -> Result<Self> {
        if local_dim < 2 {
            return Err(CoreError::InvalidInput("local dimension must be >= 2".into()));
        }
        if slices < 1 || foliation_dim < 1 {
            return Err(CoreError::InvalidInput("slices and foliation register must be >= 1".into()));
        }
        if !(step > R::zero()) {
            return Err(CoreError::InvalidInput("time step must be positive".into()));
        }
        let mut dim: usize = foliation_dim;
        for _ in 0..slices {
            dim = dim
                .checked_mul(local_dim)
                .ok_or(CoreError::DimensionCap { requested: usize::MAX, cap: policy.dim_cap })?;
        }
        if dim > policy.dim_cap {
            return Err(CoreError::DimensionCap { requested: dim, cap: policy.dim_cap });
        }
        Ok(ExtendedSpace {
            local_dim,
            slices,
            foliation_dim,
            step,
            dim_cap: policy.dim_cap,
        })
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn slices(&self) -> usize {
        self.slices
    }

    pub fn foliation_dim(&self) -> usize {
        self.foliation_dim
    }

    pub fn step(&self) -> R {
        self.step
    }

    pub fn dim_cap(&self) -> usize {
        self.dim_cap
    }

    /// Shape of the matter factors only: `[d; N]`.
    pub fn matter_shape(&self) -> Vec<usize> {
        vec![self.local_dim; self.slices]
    }

    /// Shape including the foliation register when present.
    pub fn full_shape(&self) -> Vec<usize> {
        let mut s = self.matter_shape();
        if self.foliation_dim > 1 {
            s.push(self.foliation_dim);
        }
        s
    }

    pub fn matter_dim(&self) -> usize {
        self.local_dim.pow(self.slices as u32)
    }

    pub fn full_dim(&self) -> usize {
        self.matter_dim() * self.foliation_dim
    }

    /// Same slices and step, foliation register dropped.
    pub fn matter_only(&self) -> ExtendedSpace<R> {
        ExtendedSpace { foliation_dim: 1, ..self.clone() }
    }
}

/// How a [`DiscreteAction`] was built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionKind {
    Unitary,
    TimeDependent,
    WickRotated,
    Controlled,
}

impl std::fmt::Display for ActionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ActionKind::Unitary => "unitary",
            ActionKind::TimeDependent => "time_dependent",
            ActionKind::WickRotated => "wick_rotated",
            ActionKind::Controlled => "controlled",
        };
        f.write_str(s)
    }
}

/// The operator `e^{iS}` on the extended space, together with the per-slice
/// generators it was assembled from.
#[derive(Debug, Clone)]
pub struct DiscreteAction<R: Real> {
    pub space: ExtendedSpace<R>,
    pub matrix: Operator<R>,
    pub kind: ActionKind,
    pub slice_hamiltonians: Vec<Operator<R>>,
}

impl<R: Real> DiscreteAction<R> {
    /// Condition a controlled action on foliation register value `k`,
    /// returning the standalone action block for that branch.
    pub fn condition_on(&self, k: usize) -> Result<DiscreteAction<R>> {
        if self.kind != ActionKind::Controlled {
            return Err(CoreError::WrongActionKind {
                expected: "controlled".into(),
                got: self.kind.to_string(),
            });
        }
        let kdim = self.space.foliation_dim;
        if k >= kdim {
            return Err(CoreError::InvalidInput(format!(
                "foliation register value {k} out of range 0..{kdim}"
            )));
        }
        let block = Operator::from_fn(self.space.matter_shape(), |i, j| {
            self.matrix.get(i * kdim + k, j * kdim + k)
        });
        let sub = self.space.matter_only();
        Ok(DiscreteAction {
            space: sub,
            matrix: block,
            kind: ActionKind::Unitary,
            slice_hamiltonians: self
                .slice_hamiltonians
                .get(k)
                .map(|h| vec![h.clone()])
                .unwrap_or_default(),
        })
    }
}

/// Permutation operator realizing `|n1 n2 ... nN> -> |nN n1 n2 ...>` on the
/// matter factors. Built directly as a basis permutation, never by
/// exponentiating a generator, so its algebra is exact.
pub fn cyclic_shift<R: Real>(space: &ExtendedSpace<R>) -> Operator<R> {
    let shape = space.matter_shape();
    let index = MultiIndex::new(&shape);
    let n = space.slices;
    Operator::from_permutation(shape.clone(), move |src| {
        let digits = index.unrank(src);
        let mut rotated = Vec::with_capacity(n);
        rotated.push(digits[n - 1]);
        rotated.extend_from_slice(&digits[..n - 1]);
        index.rank(&rotated)
    })
}

/// Embed a local operator at a 1-based slice: `I ⊗ .. ⊗ op ⊗ .. ⊗ I`.
pub fn embed_at_slice<R: Real>(
    space: &ExtendedSpace<R>,
    op: &Operator<R>,
    slice: usize,
) -> Result<Operator<R>> {
    if slice < 1 || slice > space.slices {
        return Err(CoreError::SliceOutOfRange { slice, slices: space.slices });
    }
    if op.side() != space.local_dim {
        return Err(CoreError::ShapeMismatch(format!(
            "slice operator side {} does not match local dimension {}",
            op.side(),
            space.local_dim
        )));
    }
    let shape = space.matter_shape();
    let index = MultiIndex::new(&shape);
    let pos = slice - 1;
    let mut out = Operator::zeros(shape.clone());
    let total = space.matter_dim();
    for row in 0..total {
        let rd = index.unrank(row);
        for a in 0..space.local_dim {
            let v = op.get(rd[pos], a);
            if v.re.is_zero() && v.im.is_zero() {
                continue;
            }
            let mut cd = rd.clone();
            cd[pos] = a;
            out.set(row, index.rank(&cd), v);
        }
    }
    Ok(out)
}

fn warn_if_not_hermitian<R: Real>(h: &Operator<R>, context: &str) -> bool {
    let tol = h.max_abs().max(R::one()) * R::of(1e-12);
    let hermitian = h.is_hermitian(tol);
    if !hermitian {
        log::warn!("{context}: generator is not Hermitian; the construction still holds, but the action is not unitary");
    }
    hermitian
}

fn slice_unitaries_product<R: Real>(
    space: &ExtendedSpace<R>,
    us: &[Operator<R>],
) -> Result<Operator<R>> {
    let mut total = us[0].clone();
    for u in &us[1..] {
        total = tensor_product(&total, u, Some(space.dim_cap))?;
    }
    Ok(total)
}

/// `e^{iS} = shift · ⊗_i e^{-i e H}` for a single Hamiltonian on every slice.
pub fn build_action<R: Real>(space: &ExtendedSpace<R>, h: &Operator<R>) -> Result<DiscreteAction<R>> {
    if space.foliation_dim != 1 {
        return Err(CoreError::InvalidInput(
            "build_action expects no foliation register; use build_controlled_action".into(),
        ));
    }
    if h.side() != space.local_dim {
        return Err(CoreError::ShapeMismatch(format!(
            "Hamiltonian side {} does not match local dimension {}",
            h.side(),
            space.local_dim
        )));
    }
    let hermitian = warn_if_not_hermitian(h, "build_action");
    let u = matrix_exp(h, ci(-space.step))?;
    let us = vec![u; space.slices];
    let matrix = cyclic_shift(space).mul(&slice_unitaries_product(space, &us)?);
    Ok(DiscreteAction {
        space: space.clone(),
        matrix,
        kind: if hermitian { ActionKind::Unitary } else { ActionKind::TimeDependent },
        slice_hamiltonians: vec![h.clone(); space.slices],
    })
}

/// Time-dependent variant: slice `i` carries `exp(-i e H_i)`.
pub fn build_action_timedep<R: Real>(
    space: &ExtendedSpace<R>,
    hs: &[Operator<R>],
) -> Result<DiscreteAction<R>> {
    if space.foliation_dim != 1 {
        return Err(CoreError::InvalidInput("foliation register not supported here".into()));
    }
    if hs.len() != space.slices {
        return Err(CoreError::InvalidInput(format!(
            "need {} slice Hamiltonians, got {}",
            space.slices,
            hs.len()
        )));
    }
    let mut us = Vec::with_capacity(hs.len());
    for h in hs {
        if h.side() != space.local_dim {
            return Err(CoreError::ShapeMismatch("slice Hamiltonian side mismatch".into()));
        }
        us.push(matrix_exp(h, ci(-space.step))?);
    }
    let matrix = cyclic_shift(space).mul(&slice_unitaries_product(space, &us)?);
    Ok(DiscreteAction {
        space: space.clone(),
        matrix,
        kind: ActionKind::TimeDependent,
        slice_hamiltonians: hs.to_vec(),
    })
}

/// Alternative exact input path: per-slice unitaries supplied directly.
pub fn build_action_from_unitaries<R: Real>(
    space: &ExtendedSpace<R>,
    us: &[Operator<R>],
) -> Result<DiscreteAction<R>> {
    if us.len() != space.slices {
        return Err(CoreError::InvalidInput(format!(
            "need {} slice unitaries, got {}",
            space.slices,
            us.len()
        )));
    }
    for u in us {
        if u.side() != space.local_dim {
            return Err(CoreError::ShapeMismatch("slice unitary side mismatch".into()));
        }
    }
    let matrix = cyclic_shift(space).mul(&slice_unitaries_product(space, us)?);
    Ok(DiscreteAction {
        space: space.clone(),
        matrix,
        kind: ActionKind::TimeDependent,
        slice_hamiltonians: Vec::new(),
    })
}

/// Wick-rotated action: `H -> -iH`, so each slice factor is `exp(-e H)` and
/// the full trace computes thermal objects at `beta = N e`.
pub fn build_action_wick<R: Real>(
    space: &ExtendedSpace<R>,
    h: &Operator<R>,
) -> Result<DiscreteAction<R>> {
    if space.foliation_dim != 1 {
        return Err(CoreError::InvalidInput("foliation register not supported here".into()));
    }
    if h.side() != space.local_dim {
        return Err(CoreError::ShapeMismatch("Hamiltonian side mismatch".into()));
    }
    warn_if_not_hermitian(h, "build_action_wick");
    let w = matrix_exp(h, cr(-space.step))?;
    let ws = vec![w; space.slices];
    let matrix = cyclic_shift(space).mul(&slice_unitaries_product(space, &ws)?);
    Ok(DiscreteAction {
        space: space.clone(),
        matrix,
        kind: ActionKind::WickRotated,
        slice_hamiltonians: vec![h.clone(); space.slices],
    })
}

/// Foliation-controlled action `sum_k e^{iS(H_k)} ⊗ |k><k|` with the
/// register as the last tensor factor.
pub fn build_controlled_action<R: Real>(
    space: &ExtendedSpace<R>,
    family: &[Operator<R>],
) -> Result<DiscreteAction<R>> {
    let kdim = space.foliation_dim;
    if family.len() != kdim {
        return Err(CoreError::InvalidInput(format!(
            "need {} branch Hamiltonians, got {}",
            kdim,
            family.len()
        )));
    }
    let matter = space.matter_only();
    let mut matrix = Operator::zeros(space.full_shape());
    for (k, h) in family.iter().enumerate() {
        let block = build_action(&matter, h)?.matrix;
        let mut proj = Operator::zeros(vec![kdim]);
        proj.set(k, k, cr(R::one()));
        let term = tensor_product(&block, &proj, Some(space.dim_cap))?;
        matrix = matrix.add(&term.with_shape(space.full_shape()));
    }
    Ok(DiscreteAction {
        space: space.clone(),
        matrix,
        kind: if kdim == 1 { ActionKind::Unitary } else { ActionKind::Controlled },
        slice_hamiltonians: family.to_vec(),
    })
}
