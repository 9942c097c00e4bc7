//! Spin observables, the four proposition states and projectors, and the
//! nondegenerate observable `H = sum_i c_i P_i` from which each projector can
//! be recovered as a polynomial in `H`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::{
    self, c, is_hermitian, matmul, matvec, tensor, CMatrix, CVector, LinalgError, DEFAULT_TOL,
};

/// Tolerance for comparing projectors recovered from `H` against the originals.
pub const RECOVERY_TOL: f64 = 1e-9;

/// Minimum relative gap between coefficients of a maximal observable.
pub const COEFF_REL_GAP: f64 = 1e-9;

pub const DEFAULT_COEFFICIENTS: [f64; 4] = [1.0, 2.0, 3.0, 4.0];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ObservableError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("unknown product observable label {0:?} (expected AB, ab, Ab or aB)")]
    UnknownLabel(String),
    #[error("{0} is not a Hermitian involution")]
    NotInvolution(ProductLabel),
    #[error("construction fault for psi_{index}: {equation} residual {residual:e}")]
    ConstructionFault {
        index: usize,
        equation: &'static str,
        residual: f64,
    },
    #[error("coefficients {0:?} are not pairwise distinct")]
    DuplicateCoefficients([f64; 4]),
    #[error("coefficient {0} is not finite")]
    NonFiniteCoefficient(f64),
}

/// The single-particle observables A = sigma_z(1), B = sigma_z(2),
/// a = sigma_x(1), b = sigma_x(2), each as a 2x2 operator on its own particle.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinObservables {
    pub z1: CMatrix,
    pub z2: CMatrix,
    pub x1: CMatrix,
    pub x2: CMatrix,
}

impl SpinObservables {
    pub fn canonical() -> Self {
        Self {
            z1: linalg::sigma_z(),
            z2: linalg::sigma_z(),
            x1: linalg::sigma_x(),
            x2: linalg::sigma_x(),
        }
    }

    pub fn product(&self, label: ProductLabel) -> Result<CMatrix, LinalgError> {
        match label {
            ProductLabel::ZZ => tensor(&self.z1, &self.z2),
            ProductLabel::XX => tensor(&self.x1, &self.x2),
            ProductLabel::ZX => tensor(&self.z1, &self.x2),
            ProductLabel::XZ => tensor(&self.x1, &self.z2),
        }
    }
}

/// Two-particle product observables. Display names follow the usual
/// letters: `AB`, `ab`, `Ab`, `aB`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProductLabel {
    /// AB = sigma_z (x) sigma_z
    ZZ,
    /// ab = sigma_x (x) sigma_x
    XX,
    /// Ab = sigma_z (x) sigma_x
    ZX,
    /// aB = sigma_x (x) sigma_z
    XZ,
}

impl ProductLabel {
    pub const ALL: [ProductLabel; 4] = [Self::ZZ, Self::XX, Self::ZX, Self::XZ];

    pub fn name(self) -> &'static str {
        match self {
            Self::ZZ => "AB",
            Self::XX => "ab",
            Self::ZX => "Ab",
            Self::XZ => "aB",
        }
    }
}

impl fmt::Display for ProductLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProductLabel {
    type Err = ObservableError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| ObservableError::UnknownLabel(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductObservable {
    pub label: ProductLabel,
    pub matrix: CMatrix,
}

pub fn build_product_observable(label: ProductLabel) -> ProductObservable {
    build_product_observable_from(&SpinObservables::canonical(), label)
        .expect("canonical Pauli operators are Hermitian involutions")
}

pub fn build_product_observable_from(
    spins: &SpinObservables,
    label: ProductLabel,
) -> Result<ProductObservable, ObservableError> {
    let matrix = spins.product(label)?;
    let square = matmul(&matrix, &matrix)?;
    if !is_hermitian(&matrix, DEFAULT_TOL) || !square.approx_eq(&CMatrix::identity(4)?, DEFAULT_TOL)
    {
        return Err(ObservableError::NotInvolution(label));
    }
    Ok(ProductObservable { label, matrix })
}

/// Defining data of one proposition: the commuting pair of product
/// observables it constrains and the common eigenvalue both must take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PropositionSpec {
    pub first: ProductLabel,
    pub second: ProductLabel,
    pub eigenvalue: i8,
    pub equation: &'static str,
}

/// P1: AB = 1 and ab = 1; P2: AB = -1 and ab = -1; P3: Ab = 1 and aB = 1;
/// P4: Ab = -1 and aB = -1.
pub const PROPOSITIONS: [PropositionSpec; 4] = [
    PropositionSpec {
        first: ProductLabel::ZZ,
        second: ProductLabel::XX,
        eigenvalue: 1,
        equation: "AB psi_1 = +psi_1, ab psi_1 = +psi_1",
    },
    PropositionSpec {
        first: ProductLabel::ZZ,
        second: ProductLabel::XX,
        eigenvalue: -1,
        equation: "AB psi_2 = -psi_2, ab psi_2 = -psi_2",
    },
    PropositionSpec {
        first: ProductLabel::ZX,
        second: ProductLabel::XZ,
        eigenvalue: 1,
        equation: "Ab psi_3 = +psi_3, aB psi_3 = +psi_3",
    },
    PropositionSpec {
        first: ProductLabel::ZX,
        second: ProductLabel::XZ,
        eigenvalue: -1,
        equation: "Ab psi_4 = -psi_4, aB psi_4 = -psi_4",
    },
];

/// The states |psi_1>..|psi_4> and their rank-one projectors.
#[derive(Debug, Clone, PartialEq)]
pub struct PropositionBasis {
    pub states: [CVector; 4],
    pub projectors: [CMatrix; 4],
}

impl PropositionBasis {
    /// Builds a basis from explicit projectors. States are not re-derived,
    /// which lets callers assemble deliberately broken bases for testing
    /// the theorem checks.
    pub fn from_parts(states: [CVector; 4], projectors: [CMatrix; 4]) -> Self {
        Self { states, projectors }
    }

    pub fn state(&self, index: usize) -> &CVector {
        &self.states[index]
    }

    pub fn projector(&self, index: usize) -> &CMatrix {
        &self.projectors[index]
    }

    /// Largest entrywise |P_i P_j| over i != j.
    pub fn orthogonality_defect(&self) -> Result<f64, LinalgError> {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    worst = worst.max(matmul(&self.projectors[i], &self.projectors[j])?.max_abs());
                }
            }
        }
        Ok(worst)
    }

    /// Largest entrywise |sum_i P_i - 1|.
    pub fn completeness_defect(&self) -> Result<f64, LinalgError> {
        let mut sum = CMatrix::zeros(4)?;
        for p in &self.projectors {
            sum = sum.add(p)?;
        }
        sum.max_abs_diff(&CMatrix::identity(4)?)
    }

    /// Largest entrywise commutator [P_i, P_j] over all pairs.
    pub fn commutation_defect(&self) -> Result<f64, LinalgError> {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                let comm = linalg::commutator(&self.projectors[i], &self.projectors[j])?;
                worst = worst.max(comm.max_abs());
            }
        }
        Ok(worst)
    }
}

/// Residual norms `|M psi_i - s psi_i|` for both defining equations of every
/// proposition, measured against the supplied spin operators.
pub fn eigen_residuals(
    basis: &PropositionBasis,
    spins: &SpinObservables,
) -> Result<[[f64; 2]; 4], LinalgError> {
    let mut out = [[0.0; 2]; 4];
    for (i, prop) in PROPOSITIONS.iter().enumerate() {
        let psi = &basis.states[i];
        let target = psi.scale(c(f64::from(prop.eigenvalue), 0.0));
        for (k, label) in [prop.first, prop.second].into_iter().enumerate() {
            let m = spins.product(label)?;
            out[i][k] = matvec(&m, psi)?.sub(&target)?.norm();
        }
    }
    Ok(out)
}

/// Joint eigenvector of the commuting involutions `m1`, `m2` with common
/// eigenvalue `s`: the range of `(1 + s m1)(1 + s m2) / 4`, read off from its
/// largest column.
fn joint_eigenvector(m1: &CMatrix, m2: &CMatrix, s: f64) -> Result<Option<CVector>, LinalgError> {
    let id = CMatrix::identity(4)?;
    let half = c(0.5, 0.0);
    let q1 = id.add(&m1.scale(c(s, 0.0)))?.scale(half);
    let q2 = id.add(&m2.scale(c(s, 0.0)))?.scale(half);
    let q = matmul(&q1, &q2)?;
    let best = (0..4)
        .map(|k| q.column(k))
        .max_by(|a, b| a.norm_sqr().total_cmp(&b.norm_sqr()))
        .expect("four columns");
    Ok(best
        .normalized(1e-6)
        .map(|v| v.with_canonical_phase(DEFAULT_TOL)))
}

/// Constructs the states for the given spin operators without checking the
/// defining equations.
fn construct_basis(spins: &SpinObservables) -> Result<PropositionBasis, ObservableError> {
    let mut states = Vec::with_capacity(4);
    for (i, prop) in PROPOSITIONS.iter().enumerate() {
        let m1 = spins.product(prop.first)?;
        let m2 = spins.product(prop.second)?;
        let psi = joint_eigenvector(&m1, &m2, f64::from(prop.eigenvalue))?.ok_or(
            ObservableError::ConstructionFault {
                index: i + 1,
                equation: prop.equation,
                residual: f64::INFINITY,
            },
        )?;
        states.push(psi);
    }
    let states: [CVector; 4] = states.try_into().expect("four states");
    let mut projectors = Vec::with_capacity(4);
    for psi in &states {
        projectors.push(psi.outer(psi)?);
    }
    Ok(PropositionBasis {
        states,
        projectors: projectors.try_into().expect("four projectors"),
    })
}

/// Builds |psi_1>..|psi_4> from the canonical Pauli operators and checks
/// all eight eigenvalue equations at the default tolerance.
pub fn build_proposition_basis() -> Result<PropositionBasis, ObservableError> {
    let spins = SpinObservables::canonical();
    let basis = construct_basis(&spins)?;
    let residuals = eigen_residuals(&basis, &spins)?;
    for (i, prop) in PROPOSITIONS.iter().enumerate() {
        let residual = residuals[i][0].max(residuals[i][1]);
        if residual >= DEFAULT_TOL || (basis.states[i].norm() - 1.0).abs() >= DEFAULT_TOL {
            return Err(ObservableError::ConstructionFault {
                index: i + 1,
                equation: prop.equation,
                residual,
            });
        }
    }
    Ok(basis)
}

/// `H = sum_i c_i P_i` with pairwise distinct `c_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaximalObservable {
    coefficients: [f64; 4],
    matrix: CMatrix,
}

impl MaximalObservable {
    pub fn coefficients(&self) -> [f64; 4] {
        self.coefficients
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

pub fn validate_coefficients(coefficients: [f64; 4]) -> Result<(), ObservableError> {
    if let Some(&bad) = coefficients.iter().find(|x| !x.is_finite()) {
        return Err(ObservableError::NonFiniteCoefficient(bad));
    }
    let scale = coefficients.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    for i in 0..4 {
        for j in (i + 1)..4 {
            if (coefficients[i] - coefficients[j]).abs() <= COEFF_REL_GAP * scale {
                return Err(ObservableError::DuplicateCoefficients(coefficients));
            }
        }
    }
    Ok(())
}

pub fn build_maximal_observable(
    coefficients: [f64; 4],
    basis: &PropositionBasis,
) -> Result<MaximalObservable, ObservableError> {
    validate_coefficients(coefficients)?;
    let mut matrix = CMatrix::zeros(4)?;
    for (ci, p) in coefficients.iter().zip(&basis.projectors) {
        matrix = matrix.add(&p.scale(c(*ci, 0.0)))?;
    }
    Ok(MaximalObservable {
        coefficients,
        matrix,
    })
}

/// `P_i = prod_{j != i} (H - c_j 1) / (c_i - c_j)`.
pub fn recover_projectors(h: &MaximalObservable) -> [CMatrix; 4] {
    let id = CMatrix::identity(4).expect("dim 4");
    let cs = h.coefficients;
    std::array::from_fn(|i| {
        let mut acc = id.clone();
        for j in (0..4).filter(|&j| j != i) {
            let factor = h
                .matrix
                .sub(&id.scale(c(cs[j], 0.0)))
                .expect("dim 4")
                .scale(Complex64::new(1.0 / (cs[i] - cs[j]), 0.0));
            acc = matmul(&acc, &factor).expect("dim 4");
        }
        acc
    })
}
