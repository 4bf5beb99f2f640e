//! Orthogonal decomposition into indecomposable sublattices.
//!
//! [`orthogonal_decomposition`] scans a complete generating system in
//! nondecreasing norm. A vector already in the sum of the current components
//! is skipped. Otherwise every component it is not orthogonal to is merged
//! with it into one new component `ℤv + Σ_{j∈J} L_j`; the remaining
//! components are orthogonal to the merged one.
//!
//! [`graph_decomposition_oracle`] builds the non-orthogonality graph on the
//! length-indecomposable vectors of the same set and reads the components off
//! its connected components.

use std::collections::VecDeque;

use num_traits::Zero;

use crate::enumerate::first_minimum_sq;
use crate::error::{LatticeError, Result};
use crate::hnf::{canonical_form, CanonicalForm};
use crate::linalg::{GeneratingSet, LatticeBasis, LatticeVector, Scalar};
use crate::reduction::{mlll_with_stats, ReductionParams};

/// One summand `L_i`. Its basis vectors span the target of the orthogonal
/// projection `π_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    basis: LatticeBasis,
}

impl Component {
    pub fn new(basis: LatticeBasis) -> Self {
        debug_assert!(!basis.is_empty());
        Self { basis }
    }

    pub fn basis(&self) -> &LatticeBasis {
        &self.basis
    }

    pub fn span_witnesses(&self) -> &[LatticeVector] {
        self.basis.vectors()
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        canonical_form(self.basis.dim(), self.basis.vectors()).expect("dimensions agree")
    }
}

/// `π(v) ≠ 0` for the projection onto the component's span.
pub fn projection_nonzero(component: &Component, v: &LatticeVector) -> bool {
    component
        .span_witnesses()
        .iter()
        .any(|b| !b.dot(v).expect("dimensions agree").is_zero())
}

/// `L = L_1 ⊥ … ⊥ L_r` in canonical component order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    components: Vec<Component>,
    grouped_basis: Vec<LatticeVector>,
    indices: Vec<usize>,
}

impl Decomposition {
    /// Sorts components by `(λ₁², canonical form)` and lays out the grouped basis.
    fn assemble(components: Vec<Component>) -> Result<Self> {
        let mut keyed = components
            .into_iter()
            .map(|c| Ok(((first_minimum_sq(c.basis())?, c.canonical_form()), c)))
            .collect::<Result<Vec<_>>>()?;
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        let components: Vec<Component> = keyed.into_iter().map(|(_, c)| c).collect();
        let mut grouped_basis = Vec::new();
        let mut indices = Vec::with_capacity(components.len());
        for c in &components {
            indices.push(grouped_basis.len() + 1);
            grouped_basis.extend_from_slice(c.span_witnesses());
        }
        Ok(Self {
            components,
            grouped_basis,
            indices,
        })
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Number of summands `r`.
    pub fn r(&self) -> usize {
        self.components.len()
    }

    /// `b'_1, …, b'_n`, the component bases concatenated.
    pub fn grouped_basis(&self) -> &[LatticeVector] {
        &self.grouped_basis
    }

    /// 1-based start offsets `i_1 = 1 < i_2 < … < i_r`.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// The offsets followed by the sentinel `i_{r+1} = n + 1`.
    pub fn indices_with_sentinel(&self) -> Vec<usize> {
        let mut out = self.indices.clone();
        out.push(self.grouped_basis.len() + 1);
        out
    }

    pub fn rank(&self) -> usize {
        self.grouped_basis.len()
    }

    /// Canonical forms of the components, in component order. Two
    /// decompositions of the same lattice agree iff these agree.
    pub fn canonical(&self) -> Vec<CanonicalForm> {
        self.components.iter().map(Component::canonical_form).collect()
    }

    /// Every inner product between vectors of distinct components is zero.
    pub fn pairwise_orthogonal(&self) -> bool {
        components_orthogonal(&self.components)
    }
}

pub(crate) fn components_orthogonal(components: &[Component]) -> bool {
    components.iter().enumerate().all(|(i, a)| {
        components[i + 1..].iter().all(|b| {
            a.span_witnesses().iter().all(|x| {
                b.span_witnesses()
                    .iter()
                    .all(|y| x.dot(y).expect("dimensions agree").is_zero())
            })
        })
    })
}

/// What happened to one scanned vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpdateEvent {
    pub r_before: usize,
    /// `|J|`, the components merged with the new vector.
    pub merged: usize,
    pub r_after: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DecompositionStats {
    pub scanned: usize,
    pub membership_tests: usize,
    /// Component-level `π_j(v) ≠ 0` tests.
    pub adjacency_tests: usize,
    /// Upper bound on the inner products evaluated by those tests.
    pub inner_products: usize,
    pub updates: Vec<UpdateEvent>,
}

impl DecompositionStats {
    pub fn update_count(&self) -> usize {
        self.updates.len()
    }

    /// `Σ (|J| − 1)` over updates that merged at least one component.
    pub fn merges(&self) -> usize {
        self.updates.iter().map(|u| u.merged.saturating_sub(1)).sum()
    }
}

fn check_input(s: &GeneratingSet) -> Result<()> {
    if !s.is_complete() {
        return Err(LatticeError::Incomplete);
    }
    if s.is_empty() {
        return Err(LatticeError::EmptyInput);
    }
    Ok(())
}

pub fn orthogonal_decomposition(s: &GeneratingSet, params: &ReductionParams) -> Result<Decomposition> {
    check_input(s)?;
    Ok(decompose_in_order(&s.sorted_by_norm(), params, |_| {})?.0)
}

/// The scan over a caller-chosen order (nondecreasing in norm). `observe` is
/// called after every scanned vector with the components maintained so far.
pub fn decompose_in_order<F>(
    vectors: &[LatticeVector],
    params: &ReductionParams,
    mut observe: F,
) -> Result<(Decomposition, DecompositionStats)>
where
    F: FnMut(&[Component]),
{
    let Some(first) = vectors.first() else {
        return Err(LatticeError::EmptyInput);
    };
    if vectors.windows(2).any(|w| w[0].norm_sq() > w[1].norm_sq()) {
        return Err(LatticeError::NotNormOrdered);
    }
    let dim = first.dim();
    let mut stats = DecompositionStats::default();
    let mut components: Vec<Component> = Vec::new();
    let mut sum_basis = LatticeBasis::empty(dim);

    for v in vectors {
        if v.dim() != dim {
            return Err(LatticeError::DimensionMismatch {
                expected: dim,
                found: v.dim(),
            });
        }
        if v.is_zero() {
            continue;
        }
        stats.scanned += 1;
        stats.membership_tests += 1;
        if sum_basis.is_member(v) {
            observe(&components);
            continue;
        }

        let r_before = components.len();
        let mut generators = vec![v.clone()];
        let mut kept = Vec::with_capacity(r_before);
        for c in components {
            stats.adjacency_tests += 1;
            stats.inner_products += c.rank();
            if projection_nonzero(&c, v) {
                generators.extend(c.basis.into_vectors());
            } else {
                kept.push(c);
            }
        }
        let merged = r_before - kept.len();
        let (m, _) = mlll_with_stats(dim, generators, params);
        kept.push(Component::new(m));
        components = kept;
        stats.updates.push(UpdateEvent {
            r_before,
            merged,
            r_after: components.len(),
        });
        let concat = components
            .iter()
            .flat_map(|c| c.span_witnesses().iter().cloned())
            .collect();
        sum_basis = LatticeBasis::from_independent(dim, concat);
        observe(&components);
    }

    Ok((Decomposition::assemble(components)?, stats))
}

/// `v = x + y` with nonzero lattice vectors `x, y` both strictly shorter than
/// `v`. Searches `x` in `s`, which must be complete for the answer to be exact.
///
/// The inequalities are strict: with `≤`, every minimal vector of `D₄` would
/// split into two other minimal vectors and the graph would lose all its
/// vertices.
pub fn is_length_decomposable(v: &LatticeVector, s: &GeneratingSet) -> bool {
    let nv = v.norm_sq();
    s.vectors()
        .iter()
        .any(|x| length_splits(v, &nv, x))
}

/// `|x|² < |v|²` and `|v − x|² < |v|²`; the latter is `|x|² < 2 (v, x)`.
fn length_splits(v: &LatticeVector, nv: &Scalar, x: &LatticeVector) -> bool {
    let nx = x.norm_sq();
    if nx >= *nv {
        return false;
    }
    let two_dot = v.dot(x).expect("dimensions agree") * Scalar::from_integer(2.into());
    nx < two_dot
}

/// Connected components of the graph on the length-indecomposable vectors of
/// `s`, with edges between non-orthogonal pairs.
pub fn graph_decomposition_oracle(s: &GeneratingSet) -> Result<Decomposition> {
    check_input(s)?;
    let dim = s.dim().expect("nonempty");
    let sorted = s.sorted_by_norm();
    let norms: Vec<Scalar> = sorted.iter().map(LatticeVector::norm_sq).collect();
    let vertices: Vec<&LatticeVector> = sorted
        .iter()
        .zip(&norms)
        .filter(|(v, nv)| {
            !sorted
                .iter()
                .zip(&norms)
                .take_while(|(_, nx)| nx < nv)
                .any(|(x, _)| length_splits(v, nv, x))
        })
        .map(|(v, _)| v)
        .collect();

    let mut unvisited: Vec<usize> = (0..vertices.len()).collect();
    let mut groups: Vec<Vec<LatticeVector>> = Vec::new();
    while let Some(start) = unvisited.pop() {
        let mut group = vec![vertices[start].clone()];
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let (adjacent, rest): (Vec<usize>, Vec<usize>) = unvisited
                .iter()
                .partition(|&&j| !vertices[i].dot(vertices[j]).expect("dimensions agree").is_zero());
            unvisited = rest;
            for j in adjacent {
                group.push(vertices[j].clone());
                queue.push_back(j);
            }
        }
        groups.push(group);
    }

    let params = ReductionParams::default();
    let components = groups
        .into_iter()
        .map(|g| Component::new(mlll_with_stats(dim, g, &params).0))
        .collect();
    Decomposition::assemble(components)
}
