//! Composition and multiplication operators on discrete measure spaces,
//! classified against conjugations induced by measure-preserving
//! involutions.
//!
//! A discrete measure space is a countable set of atoms with positive
//! weights. A point map `T` induces the composition operator
//! `(C_T f)(x) = f(T(x))` on `l^2(mu)`, a function `phi` the multiplication
//! operator `(M_phi f)(x) = phi(x) f(x)`, and a measure-preserving
//! involution `alpha` the conjugation `(C f)(x) = conj(f(alpha(x)))`.
//! Whether these operators are C-normal is decided by pointwise identities
//! in the atom weights:
//!
//! * `M_phi` is C-normal iff `|phi(alpha(x))| = |phi(x)|` for every atom;
//! * `C_T` is C-normal iff `T` is injective on the atoms and the derivative
//!   `h(x) = mu(T^{-1}{x}) / mu({x})` satisfies `h(T(x)) = h(alpha(x))`,
//!   and `C_T` is normal iff `h = h compose T`.
//!
//! Criteria are cross-checked against the matrix battery on finite spaces.
//! Countable spaces are represented through a finite window with a marked
//! interior; on a window the derivative criterion is evaluated at interior
//! atoms, operator chains run in sparse arithmetic that is exact for
//! rational weights, and any request for data beyond the window is refused
//! rather than approximated ([`Error::BoundaryLeak`]).

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex;
use num_rational::Rational64;
use num_traits::{Num, ToPrimitive, Zero};

use crate::classify::classification_battery;
use crate::conjugation::Conjugation;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{RealScalar, C};
use crate::tolerance::ToleranceContext;

/// Name of an atom of a discrete measure space.
pub type PointId = String;

/// Atom weights: ordinary floats, or rationals when classification should
/// be exact.
pub trait Weight:
    Num + Clone + PartialOrd + std::ops::Neg<Output = Self> + std::fmt::Debug + std::fmt::Display
{
    /// Equality of weights, exact where the representation allows it.
    fn weight_eq(&self, other: &Self) -> bool;
    fn as_f64(&self) -> f64;
}

impl Weight for f64 {
    fn weight_eq(&self, other: &Self) -> bool {
        (self - other).abs() <= 1e-10 * self.abs().max(other.abs()).max(1.0)
    }
    fn as_f64(&self) -> f64 {
        *self
    }
}

impl Weight for Rational64 {
    fn weight_eq(&self, other: &Self) -> bool {
        self == other
    }
    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Whether the atom list is the whole space or a finite window into a
/// countable one.
#[derive(Clone, Debug)]
pub enum SpaceKind {
    Finite,
    /// A finite window of a countable space. `interior` marks the atoms at
    /// which windowed criteria are evaluated; it must leave enough margin
    /// that the operator chains stay inside the window. `density_bound`, if
    /// set, is the promised sup of the derivative on the full space and is
    /// enforced on the window.
    WindowedCountable { interior: BTreeSet<PointId>, density_bound: Option<f64> },
}

/// A discrete measure space: atoms with positive weights.
#[derive(Clone, Debug)]
pub struct DiscreteMeasureSpace<W: Weight> {
    points: Vec<PointId>,
    index: BTreeMap<PointId, usize>,
    weights: Vec<W>,
    kind: SpaceKind,
}

impl<W: Weight> DiscreteMeasureSpace<W> {
    fn build(atoms: Vec<(PointId, W)>, kind: SpaceKind) -> Result<Self> {
        let mut points = Vec::with_capacity(atoms.len());
        let mut weights = Vec::with_capacity(atoms.len());
        let mut index = BTreeMap::new();
        for (i, (id, w)) in atoms.into_iter().enumerate() {
            if !(w > W::zero()) {
                return Err(Error::InvalidInput(format!("atom {id} has nonpositive weight")));
            }
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::InvalidInput(format!("atom {id} listed twice")));
            }
            points.push(id);
            weights.push(w);
        }
        if let SpaceKind::WindowedCountable { interior, .. } = &kind {
            for id in interior {
                if !index.contains_key(id) {
                    return Err(Error::InvalidInput(format!(
                        "interior atom {id} is not in the window"
                    )));
                }
            }
        }
        Ok(DiscreteMeasureSpace { points, index, weights, kind })
    }

    /// A finite space from atom/weight pairs.
    pub fn finite(atoms: Vec<(PointId, W)>) -> Result<Self> {
        Self::build(atoms, SpaceKind::Finite)
    }

    /// A window into a countable space; see [`SpaceKind::WindowedCountable`].
    pub fn windowed(
        atoms: Vec<(PointId, W)>,
        interior: BTreeSet<PointId>,
        density_bound: Option<f64>,
    ) -> Result<Self> {
        Self::build(atoms, SpaceKind::WindowedCountable { interior, density_bound })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[PointId] {
        &self.points
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind, SpaceKind::Finite)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn weight(&self, id: &str) -> Option<&W> {
        self.index.get(id).map(|&i| &self.weights[i])
    }

    /// The atoms at which windowed criteria are evaluated: the interior for
    /// a window, every atom for a finite space.
    pub fn criterion_points(&self) -> Vec<&PointId> {
        match &self.kind {
            SpaceKind::Finite => self.points.iter().collect(),
            SpaceKind::WindowedCountable { interior, .. } => interior.iter().collect(),
        }
    }

    pub fn total_mass(&self) -> W {
        self.weights.iter().fold(W::zero(), |acc, w| acc + w.clone())
    }
}

/// A map between atoms, possibly partial on a window (undefined exactly at
/// atoms whose image falls outside the window).
#[derive(Clone, Debug, Default)]
pub struct PointMap {
    map: BTreeMap<PointId, PointId>,
    incomplete_preimage: BTreeSet<PointId>,
}

impl PointMap {
    /// A map defined at every listed atom.
    pub fn total(map: BTreeMap<PointId, PointId>) -> Self {
        PointMap { map, incomplete_preimage: BTreeSet::new() }
    }

    /// A window restriction of a map on a countable space. `map` omits the
    /// atoms whose image leaves the window; `incomplete_preimage` lists the
    /// window atoms that have further preimages outside the window, so
    /// window arithmetic knows where its preimage data is partial.
    pub fn windowed(
        map: BTreeMap<PointId, PointId>,
        incomplete_preimage: BTreeSet<PointId>,
    ) -> Self {
        PointMap { map, incomplete_preimage }
    }

    pub fn from_pairs(pairs: &[(&str, &str)]) -> Self {
        Self::total(pairs.iter().map(|&(a, b)| (a.to_string(), b.to_string())).collect())
    }

    pub fn apply(&self, x: &str) -> Option<&PointId> {
        self.map.get(x)
    }

    pub fn map(&self) -> &BTreeMap<PointId, PointId> {
        &self.map
    }

    pub fn incomplete_preimage(&self) -> &BTreeSet<PointId> {
        &self.incomplete_preimage
    }

    /// Defined at every atom of the space, with images inside it.
    pub fn is_total_on<W: Weight>(&self, space: &DiscreteMeasureSpace<W>) -> bool {
        space
            .points()
            .iter()
            .all(|p| self.apply(p).map(|q| space.contains(q)).unwrap_or(false))
    }

    /// No two atoms of the space share an image.
    pub fn is_injective_on<W: Weight>(&self, space: &DiscreteMeasureSpace<W>) -> bool {
        let mut seen = BTreeSet::new();
        for p in space.points() {
            if let Some(q) = self.apply(p) {
                if !seen.insert(q) {
                    return false;
                }
            }
        }
        true
    }
}

/// Check that `alpha` is an involution of the space preserving the measure:
/// total, `alpha(alpha(x)) = x`, and `mu(alpha(x)) = mu(x)`.
pub fn validate_involution<W: Weight>(
    alpha: &PointMap,
    space: &DiscreteMeasureSpace<W>,
) -> Result<()> {
    for p in space.points() {
        let Some(q) = alpha.apply(p) else {
            return Err(Error::InvalidInvolution(format!("undefined at atom {p}")));
        };
        if !space.contains(q) {
            return Err(Error::InvalidInvolution(format!("image {q} of {p} is not an atom")));
        }
        match alpha.apply(q) {
            Some(r) if r == p => {}
            _ => {
                return Err(Error::InvalidInvolution(format!(
                    "not involutive at atom {p}"
                )))
            }
        }
        let (wp, wq) = (space.weight(p).unwrap(), space.weight(q).unwrap());
        if !wp.weight_eq(wq) {
            return Err(Error::InvalidInvolution(format!(
                "weight of {p} differs from weight of {q}"
            )));
        }
    }
    Ok(())
}

/// A nonnegative function on the atoms, stored densely in atom order.
#[derive(Clone, Debug)]
pub struct Density<W: Weight> {
    values: Vec<W>,
}

impl<W: Weight> Density<W> {
    pub fn values(&self) -> &[W] {
        &self.values
    }

    pub fn value<Q: Weight>(&self, space: &DiscreteMeasureSpace<Q>, id: &str) -> Option<&W> {
        space.index_of(id).map(|i| &self.values[i])
    }

    pub fn sup_f64(&self) -> f64 {
        self.values.iter().map(|w| w.as_f64()).fold(0.0, f64::max)
    }
}

/// The derivative of the measure transported by `t`:
/// `h(x) = mu(t^{-1}{x}) / mu({x})`, atom by atom.
///
/// On a finite space `t` must be total. On a window the preimage sums run
/// over the window only, so values are reliable exactly at atoms not marked
/// [`PointMap::incomplete_preimage`]; if a configured density bound is
/// exceeded on the window the countable-space operator is unbounded and the
/// derivative is refused.
pub fn radon_nikodym<W: Weight>(
    t: &PointMap,
    space: &DiscreteMeasureSpace<W>,
) -> Result<Density<W>> {
    let n = space.len();
    let mut preimage_mass = vec![W::zero(); n];
    for p in space.points() {
        match t.apply(p) {
            Some(q) => {
                let Some(j) = space.index_of(q) else {
                    return Err(Error::InvalidInput(format!(
                        "map sends atom {p} to {q}, which is not an atom"
                    )));
                };
                preimage_mass[j] = preimage_mass[j].clone() + space.weight(p).unwrap().clone();
            }
            None if space.is_finite() => {
                return Err(Error::InvalidInput(format!(
                    "map is undefined at atom {p} of a finite space"
                )));
            }
            None => {}
        }
    }
    let values: Vec<W> = preimage_mass
        .into_iter()
        .enumerate()
        .map(|(j, m)| m / space.weights[j].clone())
        .collect();
    let density = Density { values };
    if let SpaceKind::WindowedCountable { density_bound: Some(bound), .. } = &space.kind {
        let sup = density.sup_f64();
        if sup > *bound {
            return Err(Error::UnboundedDensity(format!(
                "derivative reaches {sup} on the window, above the configured bound {bound}"
            )));
        }
    }
    if space.is_finite() {
        // Total mass is preserved: sum of h d mu equals mu of the space.
        debug_assert!({
            let lhs: W = density
                .values
                .iter()
                .zip(&space.weights)
                .fold(W::zero(), |acc, (h, w)| acc + h.clone() * w.clone());
            let rhs = space.total_mass();
            (lhs.as_f64() - rhs.as_f64()).abs() <= 1e-9 * rhs.as_f64().max(1.0)
        });
    }
    Ok(density)
}

/// The matrix of the composition operator `f -> f compose t` in the
/// orthonormal atom basis: entry `(x, y)` is `sqrt(mu(x) / mu(y))` when
/// `t(x) = y`, zero otherwise. On a window, `t` must not send any atom
/// outside (the operator would move mass the window cannot represent).
pub fn composition_matrix<R: RealScalar, W: Weight>(
    t: &PointMap,
    space: &DiscreteMeasureSpace<W>,
) -> Result<Matrix<R>> {
    let n = space.len();
    let mut m = Matrix::<R>::zeros(n, n);
    for (i, p) in space.points().iter().enumerate() {
        let Some(q) = t.apply(p) else {
            if space.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "map is undefined at atom {p} of a finite space"
                )));
            }
            return Err(Error::BoundaryLeak(format!(
                "map sends atom {p} outside the window"
            )));
        };
        let Some(j) = space.index_of(q) else {
            return Err(Error::InvalidInput(format!(
                "map sends atom {p} to {q}, which is not an atom"
            )));
        };
        let ratio = space.weights[i].clone() / space.weights[j].clone();
        m[(i, j)] = Complex::new(R::from_f64_lossy(ratio.as_f64()).sqrt(), R::zero());
    }
    Ok(m)
}

/// The conjugation `f -> conj(f compose alpha)` induced by a
/// measure-preserving involution; its matrix is the permutation of `alpha`.
pub fn involution_conj<R: RealScalar, W: Weight>(
    alpha: &PointMap,
    space: &DiscreteMeasureSpace<W>,
    tol: &ToleranceContext<R>,
) -> Result<Conjugation<R>> {
    validate_involution(alpha, space)?;
    let n = space.len();
    let mut m = Matrix::<R>::zeros(n, n);
    for (i, p) in space.points().iter().enumerate() {
        let j = space.index_of(alpha.apply(p).unwrap()).unwrap();
        m[(i, j)] = Complex::new(R::one(), R::zero());
    }
    Conjugation::custom(m, tol)
}

// ---------------------------------------------------------------------------
// Sparse window arithmetic.
//
// Operators act on finitely supported functions stored as atom -> value
// maps, with values Complex<W> so that rational weights give exact runs.
// Each application refuses inputs whose true result would depend on data
// beyond the window.

/// Finitely supported function on the atoms.
pub type SparseFn<W> = BTreeMap<PointId, Complex<W>>;

fn sparse_insert<W: Weight>(f: &mut SparseFn<W>, id: &PointId, v: Complex<W>) {
    if !v.is_zero() {
        match f.entry(id.clone()) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(v);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + v;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }
}

/// `f compose t` on the window. The support of `f` must avoid atoms with
/// incomplete preimage data: the true result lives on the full preimage of
/// the support, and only the window part of it can be represented.
pub fn sparse_compose<W: Weight>(
    t: &PointMap,
    space: &DiscreteMeasureSpace<W>,
    f: &SparseFn<W>,
) -> Result<SparseFn<W>> {
    for id in f.keys() {
        if t.incomplete_preimage().contains(id) {
            return Err(Error::BoundaryLeak(format!(
                "composition needs preimages of atom {id} beyond the window"
            )));
        }
    }
    let mut out = SparseFn::new();
    for p in space.points() {
        if let Some(q) = t.apply(p) {
            if let Some(v) = f.get(q) {
                sparse_insert(&mut out, p, v.clone());
            }
        }
    }
    Ok(out)
}

/// Adjoint of the composition operator:
/// `(C_t^* f)(y) = sum over t(x) = y of f(x) mu(x) / mu(y)`. Needs `t`
/// defined on the support of `f`; otherwise mass leaves the window.
pub fn sparse_compose_adjoint<W: Weight>(
    t: &PointMap,
    space: &DiscreteMeasureSpace<W>,
    f: &SparseFn<W>,
) -> Result<SparseFn<W>> {
    let mut out = SparseFn::new();
    for (x, v) in f {
        let Some(y) = t.apply(x) else {
            return Err(Error::BoundaryLeak(format!(
                "adjoint composition pushes atom {x} outside the window"
            )));
        };
        let (wx, wy) = (space.weight(x), space.weight(y));
        let (Some(wx), Some(wy)) = (wx, wy) else {
            return Err(Error::InvalidInput(format!("map leaves the atom list at {x}")));
        };
        let ratio = wx.clone() / wy.clone();
        let scaled = v.clone() * Complex::new(ratio, W::zero());
        sparse_insert(&mut out, y, scaled);
    }
    Ok(out)
}

/// The conjugation `conj(f compose alpha)`; `alpha` must be defined on the
/// support of `f` (it is total once validated).
pub fn sparse_conjugate<W: Weight>(alpha: &PointMap, f: &SparseFn<W>) -> Result<SparseFn<W>> {
    let mut out = SparseFn::new();
    for (x, v) in f {
        let Some(y) = alpha.apply(x) else {
            return Err(Error::InvalidInvolution(format!("undefined at atom {x}")));
        };
        sparse_insert(&mut out, y, v.conj());
    }
    Ok(out)
}

fn sparse_eq<W: Weight>(a: &SparseFn<W>, b: &SparseFn<W>) -> bool {
    let keys: BTreeSet<&PointId> = a.keys().chain(b.keys()).collect();
    let zero = Complex::<W>::zero();
    keys.into_iter().all(|k| {
        let x = a.get(k).unwrap_or(&zero);
        let y = b.get(k).unwrap_or(&zero);
        x.re.weight_eq(&y.re) && x.im.weight_eq(&y.im)
    })
}

fn indicator<W: Weight>(id: &PointId) -> SparseFn<W> {
    let mut f = SparseFn::new();
    f.insert(id.clone(), Complex::new(W::one(), W::zero()));
    f
}

// ---------------------------------------------------------------------------
// Classification.

/// Outcome for a multiplication operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MultiplicationClassification {
    /// Matrix battery verdict on the diagonal operator.
    pub c_normal: bool,
    /// The pointwise criterion `|phi(alpha(x))| = |phi(x)|`.
    pub criterion: bool,
}

/// Classify the multiplication operator `M_phi` against the conjugation of
/// `alpha`: the battery verdict and the pointwise modulus criterion, which
/// agree for every valid involution. Atoms missing from `phi` carry the
/// value zero.
pub fn classify_multiplication<R: RealScalar, W: Weight>(
    phi: &BTreeMap<PointId, C<R>>,
    alpha: &PointMap,
    space: &DiscreteMeasureSpace<W>,
    tol: &ToleranceContext<R>,
) -> Result<MultiplicationClassification> {
    let conj = involution_conj(alpha, space, tol)?;
    let value = |id: &PointId| phi.get(id).copied().unwrap_or_else(C::<R>::zero);
    let scale = space
        .points()
        .iter()
        .map(|p| value(p).norm_sqr())
        .fold(R::zero(), R::max);
    let criterion = space.points().iter().all(|p| {
        let q = alpha.apply(p).unwrap();
        let gap = (value(q).norm_sqr() - value(p).norm_sqr()).abs();
        tol.check(gap, scale)
    });
    let n = space.len();
    let diag = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            value(&space.points()[i])
        } else {
            C::<R>::zero()
        }
    });
    let report = classification_battery(&diag, &conj, tol)?;
    Ok(MultiplicationClassification { c_normal: report.c_normal, criterion })
}

/// Outcome for a composition operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompositionClassification {
    /// C-normality: battery verdict on finite spaces, exact sparse check of
    /// the commutation identity at every criterion atom on windows.
    pub c_normal: bool,
    /// Injectivity of `t` plus the derivative identity
    /// `h compose t = h compose alpha` at every criterion atom.
    pub criterion: bool,
    /// Plain normality of the operator.
    pub normal: bool,
    /// The derivative identity `h = h compose t` at every criterion atom.
    pub normal_criterion: bool,
}

fn derivative_at<'d, W: Weight>(
    h: &'d Density<W>,
    space: &DiscreteMeasureSpace<W>,
    t: &PointMap,
    id: &PointId,
) -> Result<&'d W> {
    if t.incomplete_preimage().contains(id) {
        return Err(Error::BoundaryLeak(format!(
            "derivative at atom {id} depends on preimages beyond the window"
        )));
    }
    h.value(space, id)
        .ok_or_else(|| Error::InvalidInput(format!("atom {id} is not in the window")))
}

/// Classify the composition operator of `t` against the conjugation of
/// `alpha`.
///
/// The derivative criteria are evaluated at every atom of a finite space
/// and at interior atoms of a window. C-normality and normality come from
/// the matrix battery on finite spaces; on windows they are the
/// corresponding operator identities checked in sparse window arithmetic on
/// every interior basis function, exact when the weights are rational.
pub fn classify_composition<R: RealScalar, W: Weight>(
    t: &PointMap,
    alpha: &PointMap,
    space: &DiscreteMeasureSpace<W>,
    tol: &ToleranceContext<R>,
) -> Result<CompositionClassification> {
    validate_involution(alpha, space)?;
    let h = radon_nikodym(t, space)?;
    let mut criterion = t.is_injective_on(space);
    let mut normal_criterion = true;
    for id in space.criterion_points() {
        let Some(tx) = t.apply(id) else {
            return Err(Error::BoundaryLeak(format!(
                "map is undefined at criterion atom {id}"
            )));
        };
        let ax = alpha.apply(id).unwrap();
        let h_tx = derivative_at(&h, space, t, tx)?;
        let h_ax = derivative_at(&h, space, t, ax)?;
        let h_x = derivative_at(&h, space, t, id)?;
        if !h_tx.weight_eq(h_ax) {
            criterion = false;
        }
        if !h_x.weight_eq(h_tx) {
            normal_criterion = false;
        }
    }
    let (c_normal, normal) = if space.is_finite() {
        let m = composition_matrix::<R, W>(t, space)?;
        let conj = involution_conj(alpha, space, tol)?;
        let report = classification_battery(&m, &conj, tol)?;
        (report.c_normal, report.normal)
    } else {
        let mut c_normal = true;
        let mut normal = true;
        for id in space.criterion_points() {
            let e = indicator::<W>(id);
            // C N N* e against N* N C e.
            let lhs = sparse_conjugate(
                alpha,
                &sparse_compose(t, space, &sparse_compose_adjoint(t, space, &e)?)?,
            )?;
            let rhs = sparse_compose_adjoint(
                t,
                space,
                &sparse_compose(t, space, &sparse_conjugate(alpha, &e)?)?,
            )?;
            if !sparse_eq(&lhs, &rhs) {
                c_normal = false;
            }
            // N N* e against N* N e.
            let nn = sparse_compose(t, space, &sparse_compose_adjoint(t, space, &e)?)?;
            let nsn = sparse_compose_adjoint(t, space, &sparse_compose(t, space, &e)?)?;
            if !sparse_eq(&nn, &nsn) {
                normal = false;
            }
        }
        (c_normal, normal)
    };
    Ok(CompositionClassification { c_normal, criterion, normal, normal_criterion })
}

/// The two-rail ladder window: atoms `(+, j)` and `(-, j)` for `|j| <= J`
/// with weights `2^j`, the rail swap `alpha(e, j) = (-e, j)`, and the map
/// `t(+, j) = (-, j)`, `t(-, j) = (+, j + 1)`.
///
/// `t` walks up the ladder, so its composition operator is C-normal but not
/// normal: the derivative is `1/2` on the `+` rail and `1` on the `-` rail.
/// The window has interior `|j| <= J - 1`; `t` is undefined at `(-, J)`
/// (image above the window) and the atom `(+, -J)` has a preimage below the
/// window. Returns the space, the map, and the involution.
pub fn ladder_space(
    j_max: i64,
) -> Result<(DiscreteMeasureSpace<Rational64>, PointMap, PointMap)> {
    if j_max < 2 {
        return Err(Error::InvalidParameter(
            "ladder window needs j_max at least 2".into(),
        ));
    }
    if j_max > 40 {
        return Err(Error::InvalidParameter(
            "ladder weights 2^j overflow rationals beyond j_max = 40".into(),
        ));
    }
    let pos = |j: i64| format!("pos:{j}");
    let neg = |j: i64| format!("neg:{j}");
    let weight = |j: i64| -> Rational64 {
        if j >= 0 {
            Rational64::new(1i64 << j, 1)
        } else {
            Rational64::new(1, 1i64 << (-j))
        }
    };
    let mut atoms = Vec::new();
    let mut interior = BTreeSet::new();
    let mut tmap = BTreeMap::new();
    let mut amap = BTreeMap::new();
    for j in -j_max..=j_max {
        atoms.push((pos(j), weight(j)));
        atoms.push((neg(j), weight(j)));
        if j.abs() <= j_max - 1 {
            interior.insert(pos(j));
            interior.insert(neg(j));
        }
        amap.insert(pos(j), neg(j));
        amap.insert(neg(j), pos(j));
        tmap.insert(pos(j), neg(j));
        if j < j_max {
            tmap.insert(neg(j), pos(j + 1));
        }
    }
    let space = DiscreteMeasureSpace::windowed(atoms, interior, Some(2.0))?;
    let incomplete: BTreeSet<PointId> = [pos(-j_max)].into_iter().collect();
    let t = PointMap::windowed(tmap, incomplete);
    let alpha = PointMap::total(amap);
    Ok((space, t, alpha))
}
