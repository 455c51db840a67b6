//! Geometric modules `⊕ₓ ℂ^{m_x}` and operators between them.

use std::ops::Range;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{norm, vec_norm, CMatrix};
use crate::relation::same_space;
use crate::space::ExtMetricSpace;

/// A space with a fiber dimension per point. Coordinates are laid out point
/// by point: the fiber over `x` occupies `offset(x)..offset(x) + m_x`.
#[derive(Debug, Clone)]
pub struct GeometricModule {
    space: Arc<ExtMetricSpace>,
    multiplicity: Vec<usize>,
    offsets: Vec<usize>,
}

impl PartialEq for GeometricModule {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.multiplicity == other.multiplicity
    }
}

impl GeometricModule {
    pub fn new(space: Arc<ExtMetricSpace>, multiplicity: Vec<usize>) -> Result<Self> {
        if multiplicity.len() != space.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} multiplicities for {} points",
                multiplicity.len(),
                space.len()
            )));
        }
        let mut offsets = Vec::with_capacity(multiplicity.len() + 1);
        let mut acc = 0;
        for &m in &multiplicity {
            offsets.push(acc);
            acc += m;
        }
        offsets.push(acc);
        Ok(GeometricModule {
            space,
            multiplicity,
            offsets,
        })
    }

    pub fn uniform(space: Arc<ExtMetricSpace>, m: usize) -> Self {
        let n = space.len();
        Self::new(space, vec![m; n]).expect("lengths agree")
    }

    pub fn space(&self) -> &Arc<ExtMetricSpace> {
        &self.space
    }

    pub fn multiplicity(&self) -> &[usize] {
        &self.multiplicity
    }

    pub fn mult(&self, x: usize) -> usize {
        self.multiplicity[x]
    }

    pub fn dim(&self) -> usize {
        self.offsets[self.multiplicity.len()]
    }

    pub fn offset(&self, x: usize) -> usize {
        self.offsets[x]
    }

    pub fn fiber(&self, x: usize) -> Range<usize> {
        self.offsets[x]..self.offsets[x + 1]
    }

    /// The point and fiber index of a global coordinate.
    pub fn locate(&self, coord: usize) -> (usize, usize) {
        assert!(coord < self.dim(), "coordinate {coord} out of range");
        let x = self.offsets.partition_point(|&o| o <= coord) - 1;
        (x, coord - self.offsets[x])
    }

    /// Point owning each coordinate, in coordinate order.
    pub fn coord_points(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.dim());
        for (x, &m) in self.multiplicity.iter().enumerate() {
            out.extend(std::iter::repeat_n(x, m));
        }
        out
    }

    /// Coordinates of the fibers over `set`, increasing.
    pub fn coords(&self, set: &[usize]) -> Vec<usize> {
        let mut pts = set.to_vec();
        pts.sort_unstable();
        pts.dedup();
        pts.into_iter().flat_map(|x| self.fiber(x)).collect()
    }

    pub fn is_faithful(&self) -> bool {
        self.multiplicity.iter().all(|&m| m >= 1)
    }

    pub fn is_ample(&self, kappa: usize) -> bool {
        self.multiplicity.iter().all(|&m| m >= kappa)
    }

    /// The standard basis vector at `(x, a)`.
    pub fn basis_vector(&self, x: usize, a: usize) -> Vec<C64> {
        assert!(a < self.mult(x));
        let mut v = vec![C64::new(0.0, 0.0); self.dim()];
        v[self.offset(x) + a] = C64::new(1.0, 0.0);
        v
    }
}

/// A matrix `H_source → H_target` together with both layouts.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleOperator {
    matrix: CMatrix,
    source: Arc<GeometricModule>,
    target: Arc<GeometricModule>,
}

impl ModuleOperator {
    pub fn new(matrix: CMatrix, source: Arc<GeometricModule>, target: Arc<GeometricModule>) -> Result<Self> {
        if matrix.shape() != (target.dim(), source.dim()) {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {:?}, modules need {}x{}",
                matrix.shape(),
                target.dim(),
                source.dim()
            )));
        }
        Ok(ModuleOperator {
            matrix,
            source,
            target,
        })
    }

    pub fn zeros(source: Arc<GeometricModule>, target: Arc<GeometricModule>) -> Self {
        let m = CMatrix::zeros(target.dim(), source.dim());
        ModuleOperator {
            matrix: m,
            source,
            target,
        }
    }

    pub fn identity(module: Arc<GeometricModule>) -> Self {
        ModuleOperator {
            matrix: CMatrix::identity(module.dim()),
            source: module.clone(),
            target: module,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn source(&self) -> &Arc<GeometricModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GeometricModule> {
        &self.target
    }

    /// Whether source and target live over the same space, so that block
    /// distances make sense.
    pub fn is_endomorphic_space(&self) -> bool {
        same_space(self.source.space(), self.target.space())
    }

    pub fn require_same_space(&self) -> Result<()> {
        if self.is_endomorphic_space() {
            Ok(())
        } else {
            Err(Error::SpaceMismatch(
                "operator must act between modules over one space".into(),
            ))
        }
    }

    /// The block `T_{yx} = χ_y T χ_x` as an `m_y × m_x` matrix.
    pub fn block(&self, y: usize, x: usize) -> CMatrix {
        let rows: Vec<usize> = self.target.fiber(y).collect();
        let cols: Vec<usize> = self.source.fiber(x).collect();
        self.matrix.select(&rows, &cols)
    }

    pub fn block_norm(&self, y: usize, x: usize) -> f64 {
        let (my, mx) = (self.target.mult(y), self.source.mult(x));
        if my == 0 || mx == 0 {
            return 0.0;
        }
        if my == 1 || mx == 1 {
            let b = self.block(y, x);
            return vec_norm(b.data());
        }
        norm(&self.block(y, x))
    }

    /// All block norms, row-major over (target point, source point).
    pub fn block_norms(&self) -> Vec<f64> {
        let (ny, nx) = (self.target.space().len(), self.source.space().len());
        let mut out = Vec::with_capacity(ny * nx);
        for y in 0..ny {
            for x in 0..nx {
                out.push(self.block_norm(y, x));
            }
        }
        out
    }

    /// `χ_B T χ_A` restricted to the fibers over `b` and `a`.
    pub fn cut(&self, b: &[usize], a: &[usize]) -> CMatrix {
        self.matrix.select(&self.target.coords(b), &self.source.coords(a))
    }

    pub fn cut_norm(&self, b: &[usize], a: &[usize]) -> f64 {
        norm(&self.cut(b, a))
    }

    pub fn norm(&self) -> f64 {
        norm(&self.matrix)
    }

    pub fn adjoint(&self) -> ModuleOperator {
        ModuleOperator {
            matrix: self.matrix.adjoint(),
            source: self.target.clone(),
            target: self.source.clone(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ModuleOperator) -> Result<ModuleOperator> {
        if *other.target != *self.source {
            return Err(Error::SpaceMismatch(
                "inner operator's target module differs from outer operator's source".into(),
            ));
        }
        Ok(ModuleOperator {
            matrix: self.matrix.matmul(&other.matrix)?,
            source: other.source.clone(),
            target: self.target.clone(),
        })
    }

    pub fn scale(&self, c: C64) -> ModuleOperator {
        ModuleOperator {
            matrix: self.matrix.scale(c),
            source: self.source.clone(),
            target: self.target.clone(),
        }
    }

    pub fn sub(&self, other: &ModuleOperator) -> Result<ModuleOperator> {
        self.check_same_modules(other)?;
        Ok(ModuleOperator {
            matrix: self.matrix.sub(&other.matrix)?,
            source: self.source.clone(),
            target: self.target.clone(),
        })
    }

    pub fn add(&self, other: &ModuleOperator) -> Result<ModuleOperator> {
        self.check_same_modules(other)?;
        Ok(ModuleOperator {
            matrix: self.matrix.add(&other.matrix)?,
            source: self.source.clone(),
            target: self.target.clone(),
        })
    }

    fn check_same_modules(&self, other: &ModuleOperator) -> Result<()> {
        if *self.source == *other.source && *self.target == *other.target {
            Ok(())
        } else {
            Err(Error::SpaceMismatch("operators act between different modules".into()))
        }
    }

    /// Keeps only the blocks for which `keep(y, x)` holds.
    pub fn mask_blocks(&self, mut keep: impl FnMut(usize, usize) -> bool) -> ModuleOperator {
        let rows = self.target.coord_points();
        let cols = self.source.coord_points();
        let m = CMatrix::from_fn(self.matrix.rows(), self.matrix.cols(), |i, j| {
            if keep(rows[i], cols[j]) {
                self.matrix[(i, j)]
            } else {
                C64::new(0.0, 0.0)
            }
        });
        ModuleOperator {
            matrix: m,
            source: self.source.clone(),
            target: self.target.clone(),
        }
    }
}

/// The projection onto the fibers over `a`.
pub fn chi(a: &[usize], module: &Arc<GeometricModule>) -> ModuleOperator {
    let mut m = CMatrix::zeros(module.dim(), module.dim());
    for c in module.coords(a) {
        m[(c, c)] = C64::new(1.0, 0.0);
    }
    ModuleOperator {
        matrix: m,
        source: module.clone(),
        target: module.clone(),
    }
}

/// `e_{w,v}: h ↦ ⟨v, h⟩ w`, from the module of `v` to the module of `w`.
pub fn matrix_unit(
    w: &[C64],
    target: &Arc<GeometricModule>,
    v: &[C64],
    source: &Arc<GeometricModule>,
) -> Result<ModuleOperator> {
    if w.len() != target.dim() || v.len() != source.dim() {
        return Err(Error::DimensionMismatch(format!(
            "vectors of length {} and {} for modules of dimension {} and {}",
            w.len(),
            v.len(),
            target.dim(),
            source.dim()
        )));
    }
    ModuleOperator::new(CMatrix::outer(w, v), source.clone(), target.clone())
}

/// `Ad(T)(t) = T t T^*`.
///
/// Evaluated as `(T (T t)^*)^*` so that sparse `T` (permutations, covering
/// isometries) keeps both products cheap.
pub fn ad_map(big_t: &ModuleOperator, t: &ModuleOperator) -> Result<ModuleOperator> {
    if *t.source != *big_t.source || *t.target != *big_t.source {
        return Err(Error::DimensionMismatch(
            "Ad(T) acts on operators of the source module of T".into(),
        ));
    }
    let tt = big_t.matrix.matmul(&t.matrix)?;
    let inner = big_t.matrix.matmul(&tt.adjoint())?;
    ModuleOperator::new(inner.adjoint(), big_t.target.clone(), big_t.target.clone())
}

/// `‖χ_a v‖`.
pub fn restricted_norm(v: &[C64], a: &[usize], module: &GeometricModule) -> f64 {
    module
        .coords(a)
        .into_iter()
        .map(|c| v[c].norm_sqr())
        .sum::<f64>()
        .sqrt()
}
