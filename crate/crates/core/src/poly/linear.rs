use std::fmt;

use crate::error::{Error, Result};
use crate::fields::{Field, FieldElement};

/// A 3x3 matrix acting on ternary forms by `F^g(x) = F(g x)`.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearMap3 {
    m: [[FieldElement; 3]; 3],
    det: FieldElement,
}

impl LinearMap3 {
    pub fn new(m: [[FieldElement; 3]; 3]) -> LinearMap3 {
        let det = det3(&m);
        LinearMap3 { m, det }
    }

    pub fn identity(field: &Field) -> LinearMap3 {
        LinearMap3::from_integers(field, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    }

    pub fn from_integers(field: &Field, m: [[i64; 3]; 3]) -> LinearMap3 {
        LinearMap3::new(m.map(|row| row.map(|a| field.from_i64(a))))
    }

    pub fn field(&self) -> &Field {
        self.m[0][0].field()
    }

    pub fn entry(&self, i: usize, j: usize) -> &FieldElement {
        &self.m[i][j]
    }

    pub fn rows(&self) -> &[[FieldElement; 3]; 3] {
        &self.m
    }

    pub fn det(&self) -> &FieldElement {
        &self.det
    }

    pub fn compose(&self, other: &LinearMap3) -> LinearMap3 {
        let f = self.field().clone();
        let m = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                (0..3).fold(f.zero(), |acc, k| &acc + &(&self.m[i][k] * &other.m[k][j]))
            })
        });
        LinearMap3::new(m)
    }

    pub fn transpose(&self) -> LinearMap3 {
        let m = std::array::from_fn(|i| std::array::from_fn(|j| self.m[j][i].clone()));
        LinearMap3 { m, det: self.det.clone() }
    }

    pub fn adjugate(&self) -> LinearMap3 {
        LinearMap3::new(adjugate3(&self.m))
    }

    pub fn inverse(&self) -> Result<LinearMap3> {
        if self.det.is_zero() {
            return Err(Error::SingularMap);
        }
        let inv = self.det.inv()?;
        let adj = adjugate3(&self.m);
        Ok(LinearMap3::new(adj.map(|row| row.map(|a| &a * &inv))))
    }

    /// The contragredient `g^{-T}`, acting on contravariant forms.
    pub fn inverse_transpose(&self) -> Result<LinearMap3> {
        Ok(self.inverse()?.transpose())
    }

    pub fn scale(&self, c: &FieldElement) -> LinearMap3 {
        LinearMap3::new(self.m.clone().map(|row| row.map(|a| &a * c)))
    }

    pub fn embed(&self, field: &Field) -> Result<LinearMap3> {
        let mut rows: Vec<[FieldElement; 3]> = Vec::new();
        for row in &self.m {
            rows.push([field.embed(&row[0])?, field.embed(&row[1])?, field.embed(&row[2])?]);
        }
        Ok(LinearMap3::new([rows[0].clone(), rows[1].clone(), rows[2].clone()]))
    }
}

impl fmt::Debug for LinearMap3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .m
            .iter()
            .map(|r| r.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "[{}]", rows.join(";"))
    }
}

pub(crate) fn det3<T>(m: &[[T; 3]; 3]) -> T
where
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T> + std::ops::Sub<&'a T, Output = T>,
    T: std::ops::Add<T, Output = T> + std::ops::Sub<T, Output = T>,
{
    let a = &(&m[1][1] * &m[2][2]) - &(&m[1][2] * &m[2][1]);
    let b = &(&m[1][0] * &m[2][2]) - &(&m[1][2] * &m[2][0]);
    let c = &(&m[1][0] * &m[2][1]) - &(&m[1][1] * &m[2][0]);
    (&m[0][0] * &a) - (&m[0][1] * &b) + (&m[0][2] * &c)
}

pub(crate) fn adjugate3<T>(m: &[[T; 3]; 3]) -> [[T; 3]; 3]
where
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T> + std::ops::Sub<&'a T, Output = T>,
{
    // adj[i][j] = cofactor[j][i]
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let (r0, r1) = match j {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let (c0, c1) = match i {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let minor = &(&m[r0][c0] * &m[r1][c1]) - &(&m[r0][c1] * &m[r1][c0]);
            if (i + j) % 2 == 0 {
                minor
            } else {
                &(&m[r0][c1] * &m[r1][c0]) - &(&m[r0][c0] * &m[r1][c1])
            }
        })
    })
}
