use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::Rational;

/// A 3-vector over the rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vec3Q {
    pub x: Rational,
    pub y: Rational,
    pub z: Rational,
}

impl Vec3Q {
    pub fn new(x: Rational, y: Rational, z: Rational) -> Self {
        Self { x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero(), Rational::zero())
    }

    pub fn from_array(c: [Rational; 3]) -> Self {
        let [x, y, z] = c;
        Self { x, y, z }
    }

    pub fn to_array(&self) -> [Rational; 3] {
        [self.x.clone(), self.y.clone(), self.z.clone()]
    }

    pub fn get(&self, i: usize) -> &Rational {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3Q index {i} out of range"),
        }
    }

    pub fn dot(&self, other: &Vec3Q) -> Rational {
        &self.x * &other.x + &self.y * &other.y + &self.z * &other.z
    }

    /// Right-handed cross product.
    pub fn cross(&self, other: &Vec3Q) -> Vec3Q {
        Vec3Q {
            x: &self.y * &other.z - &self.z * &other.y,
            y: &self.z * &other.x - &self.x * &other.z,
            z: &self.x * &other.y - &self.y * &other.x,
        }
    }

    pub fn norm_squared(&self) -> Rational {
        self.dot(self)
    }

    pub fn scale(&self, t: &Rational) -> Vec3Q {
        Vec3Q { x: &self.x * t, y: &self.y * t, z: &self.z * t }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    /// Squared Euclidean distance to `other`.
    pub fn dist_squared(&self, other: &Vec3Q) -> Rational {
        (self - other).norm_squared()
    }
}

impl Add for &Vec3Q {
    type Output = Vec3Q;
    fn add(self, o: &Vec3Q) -> Vec3Q {
        Vec3Q { x: &self.x + &o.x, y: &self.y + &o.y, z: &self.z + &o.z }
    }
}

impl Sub for &Vec3Q {
    type Output = Vec3Q;
    fn sub(self, o: &Vec3Q) -> Vec3Q {
        Vec3Q { x: &self.x - &o.x, y: &self.y - &o.y, z: &self.z - &o.z }
    }
}

impl Add for Vec3Q {
    type Output = Vec3Q;
    fn add(self, o: Vec3Q) -> Vec3Q {
        &self + &o
    }
}

impl Sub for Vec3Q {
    type Output = Vec3Q;
    fn sub(self, o: Vec3Q) -> Vec3Q {
        &self - &o
    }
}

impl Neg for &Vec3Q {
    type Output = Vec3Q;
    fn neg(self) -> Vec3Q {
        Vec3Q { x: -&self.x, y: -&self.y, z: -&self.z }
    }
}

impl fmt::Display for Vec3Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// A 3×3 matrix over the rationals, indexed `[row][column]`.
///
/// With the transition-matrix convention `h_j = Σ_i S[i][j] e_i`, column `j`
/// holds the coordinates of `h_j` in the `e` basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat3Q {
    pub rows: [[Rational; 3]; 3],
}

impl Mat3Q {
    pub fn from_rows(rows: [[Rational; 3]; 3]) -> Self {
        Self { rows }
    }

    pub fn from_columns(c0: &Vec3Q, c1: &Vec3Q, c2: &Vec3Q) -> Self {
        let cols = [c0, c1, c2];
        Self { rows: std::array::from_fn(|i| std::array::from_fn(|j| cols[j].get(i).clone())) }
    }

    pub fn identity() -> Self {
        Self::diagonal(Rational::one(), Rational::one(), Rational::one())
    }

    pub fn zero() -> Self {
        Self { rows: std::array::from_fn(|_| std::array::from_fn(|_| Rational::zero())) }
    }

    pub fn diagonal(a: Rational, b: Rational, c: Rational) -> Self {
        let mut m = Self::zero();
        let [r0, r1, r2] = &mut m.rows;
        r0[0] = a;
        r1[1] = b;
        r2[2] = c;
        m
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.rows[row][col]
    }

    pub fn row(&self, i: usize) -> Vec3Q {
        Vec3Q::from_array(self.rows[i].clone())
    }

    pub fn column(&self, j: usize) -> Vec3Q {
        Vec3Q::new(self.rows[0][j].clone(), self.rows[1][j].clone(), self.rows[2][j].clone())
    }

    pub fn transpose(&self) -> Mat3Q {
        Mat3Q { rows: std::array::from_fn(|i| std::array::from_fn(|j| self.rows[j][i].clone())) }
    }

    /// Cofactor expansion along the first row.
    pub fn det(&self) -> Rational {
        let m = &self.rows;
        &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
            - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
            + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
    }

    pub fn scale(&self, t: &Rational) -> Mat3Q {
        Mat3Q { rows: std::array::from_fn(|i| std::array::from_fn(|j| &self.rows[i][j] * t)) }
    }

    pub fn mul_vec(&self, v: &Vec3Q) -> Vec3Q {
        Vec3Q::new(self.row(0).dot(v), self.row(1).dot(v), self.row(2).dot(v))
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat3Q::identity()
    }
}

impl Mul for &Mat3Q {
    type Output = Mat3Q;
    fn mul(self, b: &Mat3Q) -> Mat3Q {
        let a = &self.rows;
        let b = &b.rows;
        Mat3Q {
            rows: std::array::from_fn(|i| {
                std::array::from_fn(|j| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j] + &a[i][2] * &b[2][j])
            }),
        }
    }
}

impl Mul for Mat3Q {
    type Output = Mat3Q;
    fn mul(self, b: Mat3Q) -> Mat3Q {
        &self * &b
    }
}

impl fmt::Display for Mat3Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[{}, {}, {}]", row[0], row[1], row[2])?;
        }
        Ok(())
    }
}
