//! Finite orthogonal matrix groups acting on R^n.
//!
//! A group action here is a finite list of orthogonal matrices containing
//! the identity and closed under products and inverses; validation builds
//! the full multiplication table and matches every product back into the
//! list. Constructors cover the dihedral symmetry groups of the regular
//! k-gons (k = 3..8), the full octahedral group (signed permutations of
//! the axes), and the full icosahedral reflection group, generated by the
//! reflections in its fifteen mirror planes and closed to 120 elements.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::tol::TolerancePolicy;

/// Entrywise tolerance for matching group elements; the constructors
/// produce entries from closed-form trigonometry, so products agree to
/// machine precision.
const MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct OrthogonalGroupAction {
    dim: usize,
    elements: Vec<Matrix>,
}

fn matches(a: &Matrix, b: &Matrix) -> bool {
    a.max_abs_diff(b) <= MATCH_TOL
}

fn index_of(elements: &[Matrix], m: &Matrix) -> Option<usize> {
    elements.iter().position(|e| matches(e, m))
}

impl OrthogonalGroupAction {
    /// Validates and wraps an explicit element list.
    pub fn new(dim: usize, elements: Vec<Matrix>, pol: &TolerancePolicy) -> Result<Self> {
        pol.validate()?;
        if dim == 0 || elements.is_empty() {
            return Err(Error::invalid("group needs a positive dimension and elements"));
        }
        let ortho_tol = pol.eps_eq.max(1e-12) * 10.0;
        for (i, g) in elements.iter().enumerate() {
            if g.rows != dim || g.cols != dim {
                return Err(Error::invalid(format!(
                    "element {i} is {}x{}, expected {dim}x{dim}",
                    g.rows,
                    g.cols
                )));
            }
            let gram = g.transpose().matmul(g);
            if gram.max_abs_diff(&Matrix::identity(dim)) > ortho_tol {
                return Err(Error::hypothesis(format!(
                    "element {i} is not orthogonal"
                )));
            }
        }
        let id = Matrix::identity(dim);
        if index_of(&elements, &id).is_none() {
            return Err(Error::hypothesis("group does not contain the identity"));
        }
        // Closure under products; inverses follow because a finite set
        // closed under products makes each left-multiplication a
        // permutation, but transposes are cheap to check directly.
        for (i, g) in elements.iter().enumerate() {
            if index_of(&elements, &g.transpose()).is_none() {
                return Err(Error::hypothesis(format!(
                    "inverse of element {i} is missing"
                )));
            }
            for (j, h) in elements.iter().enumerate() {
                let prod = g.matmul(h);
                if index_of(&elements, &prod).is_none() {
                    return Err(Error::hypothesis(format!(
                        "product of elements {i} and {j} is not in the group"
                    )));
                }
            }
        }
        Ok(Self { dim, elements })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    /// Dihedral group of the regular k-gon: k rotations and k reflections.
    pub fn dihedral(k: usize, pol: &TolerancePolicy) -> Result<Self> {
        if !(3..=8).contains(&k) {
            return Err(Error::invalid("dihedral constructor covers k = 3..8"));
        }
        let mut elements = Vec::with_capacity(2 * k);
        for j in 0..k {
            let th = 2.0 * std::f64::consts::PI * (j as f64) / (k as f64);
            let (s, c) = th.sin_cos();
            elements.push(Matrix::from_rows(&[vec![c, -s], vec![s, c]])?);
            // Reflection across the line at angle th/2.
            elements.push(Matrix::from_rows(&[vec![c, s], vec![s, -c]])?);
        }
        Self::new(2, elements, pol)
    }

    /// Full octahedral group: the 48 signed permutation matrices.
    pub fn octahedral(pol: &TolerancePolicy) -> Result<Self> {
        let perms = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let mut elements = Vec::with_capacity(48);
        for p in perms {
            for mask in 0..8u32 {
                let mut m = Matrix::zeros(3, 3);
                for (row, &col) in p.iter().enumerate() {
                    let sign = if mask >> row & 1 == 1 { -1.0 } else { 1.0 };
                    m[(row, col)] = sign;
                }
                elements.push(m);
            }
        }
        Self::new(3, elements, pol)
    }

    /// Full icosahedral reflection group (order 120): the closure of the
    /// reflections in the fifteen mirror planes. Mirror normals are the
    /// three coordinate axes and the twelve vectors obtained by cycling
    /// (1, t, 1/t)/2 with independent signs on the last two slots, where
    /// t is the golden ratio.
    pub fn icosahedral(pol: &TolerancePolicy) -> Result<Self> {
        let t = (1.0 + 5f64.sqrt()) / 2.0;
        let mut normals: Vec<Vec<f64>> = vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        for (s1, s2) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            let base = [1.0 / 2.0, s1 * t / 2.0, s2 / (2.0 * t)];
            for shift in 0..3 {
                let v: Vec<f64> = (0..3).map(|i| base[(i + 3 - shift) % 3]).collect();
                if normals.iter().any(|w| {
                    w.iter()
                        .zip(&v)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0_f64, f64::max)
                        < 1e-12
                        || w.iter()
                            .zip(&v)
                            .map(|(a, b)| (a + b).abs())
                            .fold(0.0_f64, f64::max)
                            < 1e-12
                }) {
                    continue;
                }
                normals.push(v);
            }
        }
        if normals.len() != 15 {
            return Err(Error::numerical(format!(
                "expected 15 mirror normals, built {}",
                normals.len()
            )));
        }
        let mut elements = vec![Matrix::identity(3)];
        for r in &normals {
            let mut m = Matrix::identity(3);
            for i in 0..3 {
                for j in 0..3 {
                    m[(i, j)] -= 2.0 * r[i] * r[j];
                }
            }
            elements.push(m);
        }
        // Close under products; the group has order 120, so cap the loop
        // well above that to catch construction mistakes.
        let mut grew = true;
        while grew {
            grew = false;
            let snapshot = elements.clone();
            for g in &snapshot {
                for h in &snapshot {
                    let prod = g.matmul(h);
                    if index_of(&elements, &prod).is_none() {
                        if elements.len() >= 150 {
                            return Err(Error::numerical(
                                "icosahedral closure exceeded the expected order",
                            ));
                        }
                        elements.push(prod);
                        grew = true;
                    }
                }
            }
        }
        if elements.len() != 120 {
            return Err(Error::numerical(format!(
                "icosahedral closure produced {} elements, expected 120",
                elements.len()
            )));
        }
        Self::new(3, elements, pol)
    }

    /// Group lookup by CLI name: d3..d8, octahedral, icosahedral.
    pub fn named(name: &str, pol: &TolerancePolicy) -> Result<Self> {
        match name {
            "d3" => Self::dihedral(3, pol),
            "d4" => Self::dihedral(4, pol),
            "d5" => Self::dihedral(5, pol),
            "d6" => Self::dihedral(6, pol),
            "d7" => Self::dihedral(7, pol),
            "d8" => Self::dihedral(8, pol),
            "octahedral" => Self::octahedral(pol),
            "icosahedral" => Self::icosahedral(pol),
            _ => Err(Error::invalid(format!(
                "unknown group '{name}'; expected d3..d8, octahedral, or icosahedral"
            ))),
        }
    }
}
