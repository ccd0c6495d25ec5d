use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Integers in JSON: plain numbers when they fit in `i64`, decimal strings
/// otherwise.
#[derive(Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Num(i64),
    Str(String),
}

fn ser_int<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(i) => s.serialize_i64(i),
        None => s.serialize_str(&v.to_string()),
    }
}

fn de_int<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    match IntRepr::deserialize(d)? {
        IntRepr::Num(i) => Ok(BigInt::from(i)),
        IntRepr::Str(s) => s.parse().map_err(serde::de::Error::custom),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct IntCell(#[serde(serialize_with = "ser_int", deserialize_with = "de_int")] BigInt);

/// A `k×k` block of a row-finite integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: Vec<Vec<BigInt>>,
}

/// A length-`k` block of a vector in `ℤ^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntVector {
    entries: Vec<BigInt>,
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<IntCell>> = self.rows.iter().map(|r| r.iter().cloned().map(IntCell).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<IntCell>> = Vec::deserialize(d)?;
        let k = rows.len();
        if rows.iter().any(|r| r.len() != k) {
            return Err(serde::de::Error::custom("matrix must be square"));
        }
        Ok(IntMatrix {
            rows: rows.into_iter().map(|r| r.into_iter().map(|c| c.0).collect()).collect(),
        })
    }
}

impl Serialize for IntVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<IntCell> = self.entries.iter().cloned().map(IntCell).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<IntCell> = Vec::deserialize(d)?;
        Ok(IntVector {
            entries: v.into_iter().map(|c| c.0).collect(),
        })
    }
}

impl IntMatrix {
    pub fn zero(k: usize) -> Self {
        IntMatrix {
            rows: vec![vec![BigInt::zero(); k]; k],
        }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::zero(k);
        for i in 0..k {
            m.rows[i][i] = BigInt::from(1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Option<Self> {
        let k = rows.len();
        rows.iter().all(|r| r.len() == k).then_some(IntMatrix { rows })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Option<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect())
    }

    /// The matrix with a single entry `v` at `(i, j)`.
    pub fn unit(k: usize, i: usize, j: usize, v: i64) -> Self {
        let mut m = Self::zero(k);
        m.rows[i][j] = BigInt::from(v);
        m
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.rows[i][j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(Zero::is_zero))
    }

    pub fn add(&self, o: &IntMatrix) -> IntMatrix {
        IntMatrix {
            rows: self.rows.iter().zip(&o.rows).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect(),
        }
    }

    pub fn sub(&self, o: &IntMatrix) -> IntMatrix {
        IntMatrix {
            rows: self.rows.iter().zip(&o.rows).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect()).collect(),
        }
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix {
            rows: self.rows.iter().map(|r| r.iter().map(|x| -x).collect()).collect(),
        }
    }

    pub fn mul(&self, o: &IntMatrix) -> IntMatrix {
        self.mul_top(o, self.dim())
    }

    /// The first `n` rows of `self·o`; the remaining rows are zero.
    pub fn mul_top(&self, o: &IntMatrix, n: usize) -> IntMatrix {
        let k = self.dim();
        let mut out = IntMatrix::zero(k);
        for i in 0..n.min(k) {
            for (l, a) in self.rows[i].iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in o.rows[l].iter().enumerate() {
                    if !b.is_zero() {
                        out.rows[i][j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &IntVector) -> IntVector {
        self.mul_vec_top(v, self.dim())
    }

    pub fn mul_vec_top(&self, v: &IntVector, n: usize) -> IntVector {
        let k = self.dim();
        let mut out = IntVector::zero(k);
        for i in 0..n.min(k) {
            for (l, a) in self.rows[i].iter().enumerate() {
                if !a.is_zero() && !v.entries[l].is_zero() {
                    out.entries[i] += a * &v.entries[l];
                }
            }
        }
        out
    }

    /// `R_i(a)`: one past the last nonzero column of row `i`.
    pub fn row_reach(&self, i: usize) -> usize {
        self.rows.get(i).map_or(0, |r| r.iter().rposition(|x| !x.is_zero()).map_or(0, |j| j + 1))
    }

    /// `Rⁿ(a) = max{R_0(a), …, R_{n−1}(a)}`.
    pub fn reach(&self, n: usize) -> usize {
        (0..n).map(|i| self.row_reach(i)).max().unwrap_or(0)
    }

    /// Whether the first `n` rows vanish (`a ∈ L_n`).
    pub fn in_level(&self, n: usize) -> bool {
        self.rows.iter().take(n).all(|r| r.iter().all(Zero::is_zero))
    }

    /// Least row where the two matrices differ.
    pub fn first_difference(&self, o: &IntMatrix) -> Option<usize> {
        self.rows.iter().zip(&o.rows).position(|(a, b)| a != b)
    }

    pub fn max_abs(&self) -> BigInt {
        self.rows.iter().flatten().map(|x| x.abs()).max().unwrap_or_default()
    }
}

impl IntVector {
    pub fn zero(k: usize) -> Self {
        IntVector {
            entries: vec![BigInt::zero(); k],
        }
    }

    pub fn from_entries(entries: Vec<BigInt>) -> Self {
        IntVector { entries }
    }

    pub fn from_i64(v: &[i64]) -> Self {
        IntVector {
            entries: v.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn unit(k: usize, i: usize, v: i64) -> Self {
        let mut out = Self::zero(k);
        out.entries[i] = BigInt::from(v);
        out
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn set(&mut self, i: usize, v: BigInt) {
        self.entries[i] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn add(&self, o: &IntVector) -> IntVector {
        IntVector {
            entries: self.entries.iter().zip(&o.entries).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, o: &IntVector) -> IntVector {
        IntVector {
            entries: self.entries.iter().zip(&o.entries).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn neg(&self) -> IntVector {
        IntVector {
            entries: self.entries.iter().map(|x| -x).collect(),
        }
    }

    /// Whether the first `n` entries vanish (`c ∈ G_n`).
    pub fn in_level(&self, n: usize) -> bool {
        self.entries.iter().take(n).all(Zero::is_zero)
    }

    pub fn max_abs(&self) -> BigInt {
        self.entries.iter().map(|x| x.abs()).max().unwrap_or_default()
    }
}
