//! Coefficients c(j) of J(q) = j(q) - 744, computed with exact integer power series.
//!
//! The primary route builds E₄ from divisor sums and Δ from the product
//! q∏(1-qⁿ)²⁴. The secondary route obtains Δ as (E₄³ - E₆²)/1728, so the two
//! only share E₄ and the final division.

use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum JfunError {
    #[error("max_j must be at least -1, got {0}")]
    BelowRange(i64),
    #[error("coefficient c({0}) requested but table stops at {1}")]
    TooShort(i64, i64),
}

/// c(-1), c(0), ..., c(max_j).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JCoeffTable {
    max_j: i64,
    coeffs: Vec<BigInt>,
}

/// Which expansion of Δ is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    EtaProduct,
    EisensteinDifference,
}

#[derive(Serialize, Deserialize)]
pub struct JCoeffJson {
    pub j: i64,
    pub c: String,
}

const CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    max_j: i64,
    coeffs: Vec<JCoeffJson>,
}

impl JCoeffTable {
    pub fn max_j(&self) -> i64 {
        self.max_j
    }

    pub fn get(&self, j: i64) -> Result<&BigInt, JfunError> {
        if j < -1 || j > self.max_j {
            return Err(JfunError::TooShort(j, self.max_j));
        }
        Ok(&self.coeffs[(j + 1) as usize])
    }

    /// c(j) as a machine integer; panics if it does not fit (only small j qualify).
    pub fn get_u64(&self, j: i64) -> Result<u64, JfunError> {
        use num_traits::ToPrimitive;
        Ok(self.get(j)?.to_u64().expect("coefficient exceeds u64"))
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().enumerate().map(|(i, c)| (i as i64 - 1, c))
    }

    pub fn to_json(&self) -> Vec<JCoeffJson> {
        self.iter()
            .map(|(j, c)| JCoeffJson { j, c: c.to_string() })
            .collect()
    }

    /// Recomputes the table from scratch and compares.
    pub fn verify(&self) -> bool {
        j_coefficients(self.max_j).map(|t| t == *self).unwrap_or(false)
    }

    /// Loads `dir/jcoeff-v1-<max_j>.json` if it is present and well formed, otherwise
    /// computes the table and tries to write the file. Write failures are ignored.
    pub fn cached(dir: &Path, max_j: i64) -> Result<Self, JfunError> {
        let path = cache_path(dir, max_j);
        if let Some(t) = read_cache(&path, max_j) {
            return Ok(t);
        }
        let t = j_coefficients(max_j)?;
        let file = CacheFile {
            version: CACHE_VERSION,
            max_j,
            coeffs: t.to_json(),
        };
        if let Ok(text) = serde_json::to_string(&file) {
            let _ = std::fs::create_dir_all(dir);
            let _ = std::fs::write(&path, text);
        }
        Ok(t)
    }
}

fn cache_path(dir: &Path, max_j: i64) -> PathBuf {
    dir.join(format!("jcoeff-v{CACHE_VERSION}-{max_j}.json"))
}

fn read_cache(path: &Path, max_j: i64) -> Option<JCoeffTable> {
    let text = std::fs::read_to_string(path).ok()?;
    let file: CacheFile = serde_json::from_str(&text).ok()?;
    if file.version != CACHE_VERSION || file.max_j != max_j {
        return None;
    }
    let coeffs = file
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, e)| (e.j == i as i64 - 1).then(|| e.c.parse::<BigInt>().ok()).flatten())
        .collect::<Option<Vec<_>>>()?;
    if coeffs.len() as i64 != max_j + 2 || !coeffs[0].is_one() || !coeffs[1].is_zero() {
        return None;
    }
    Some(JCoeffTable { max_j, coeffs })
}

pub fn j_coefficients(max_j: i64) -> Result<JCoeffTable, JfunError> {
    j_coefficients_via(max_j, Route::EtaProduct)
}

pub fn j_coefficients_via(max_j: i64, route: Route) -> Result<JCoeffTable, JfunError> {
    if max_j < -1 {
        return Err(JfunError::BelowRange(max_j));
    }
    // j(q) = q^{-1} * E4^3 / (Δ/q); we need the quotient up to q^{max_j + 1}.
    let len = (max_j + 2) as usize;
    let e4 = eisenstein(len, 3, 240);
    let e4_cubed = mul(&mul(&e4, &e4, len), &e4, len);
    let delta_over_q = match route {
        Route::EtaProduct => {
            let eta = euler_product(len);
            let eta2 = mul(&eta, &eta, len);
            let eta4 = mul(&eta2, &eta2, len);
            let eta8 = mul(&eta4, &eta4, len);
            let eta16 = mul(&eta8, &eta8, len);
            mul(&eta16, &eta8, len)
        }
        Route::EisensteinDifference => {
            // Δ = (E4^3 - E6^2)/1728 has zero constant term; shift by one.
            let e4 = eisenstein(len + 1, 3, 240);
            let e4c = mul(&mul(&e4, &e4, len + 1), &e4, len + 1);
            let e6 = eisenstein(len + 1, 5, -504);
            let e6s = mul(&e6, &e6, len + 1);
            let k = BigInt::from(1728);
            (1..=len).map(|n| (&e4c[n] - &e6s[n]) / &k).collect()
        }
    };
    let mut coeffs = div(&e4_cubed, &delta_over_q, len);
    if len > 1 {
        coeffs[1] -= BigInt::from(744);
    }
    Ok(JCoeffTable { max_j, coeffs })
}

/// 1 + scale·Σ σ_k(n) qⁿ, truncated to `len` terms.
fn eisenstein(len: usize, k: u32, scale: i64) -> Vec<BigInt> {
    let mut s = vec![BigInt::zero(); len];
    if len == 0 {
        return s;
    }
    s[0] = BigInt::one();
    for d in 1..len {
        let dk = BigInt::from(d).pow(k) * scale;
        for n in (d..len).step_by(d) {
            s[n] += &dk;
        }
    }
    s
}

/// ∏_{n≥1} (1 - qⁿ), truncated to `len` terms.
fn euler_product(len: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); len];
    if len == 0 {
        return p;
    }
    p[0] = BigInt::one();
    for n in 1..len {
        for i in (n..len).rev() {
            let t = p[i - n].clone();
            p[i] -= t;
        }
    }
    p
}

fn mul(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// a / b for b with constant term 1.
fn div(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    debug_assert!(b[0].is_one());
    let mut out: Vec<BigInt> = Vec::with_capacity(len);
    for n in 0..len {
        let mut acc = a.get(n).cloned().unwrap_or_default();
        for i in 1..=n.min(b.len() - 1) {
            acc -= &b[i] * &out[n - i];
        }
        out.push(acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_coefficients() {
        let t = j_coefficients(4).unwrap();
        assert_eq!(*t.get(-1).unwrap(), BigInt::from(1));
        assert_eq!(*t.get(0).unwrap(), BigInt::from(0));
        assert_eq!(*t.get(1).unwrap(), BigInt::from(196884));
        assert_eq!(*t.get(2).unwrap(), BigInt::from(21493760));
        assert_eq!(*t.get(3).unwrap(), BigInt::from(864299970u64));
        assert_eq!(*t.get(4).unwrap(), BigInt::from(20245856256u64));
    }

    #[test]
    fn small_tables() {
        let t = j_coefficients(0).unwrap();
        assert_eq!(t.iter().count(), 2);
        assert_eq!(j_coefficients(-1).unwrap().max_j(), -1);
        assert_eq!(j_coefficients(-2), Err(JfunError::BelowRange(-2)));
        assert_eq!(t.get(1), Err(JfunError::TooShort(1, 0)));
    }

    #[test]
    fn routes_agree() {
        let a = j_coefficients_via(12, Route::EtaProduct).unwrap();
        let b = j_coefficients_via(12, Route::EisensteinDifference).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn cache_round_trip() {
        let dir = std::env::temp_dir().join(format!("mlie-jcache-{}", std::process::id()));
        let a = JCoeffTable::cached(&dir, 6).unwrap();
        let b = JCoeffTable::cached(&dir, 6).unwrap();
        assert_eq!(a, b);
        assert!(b.verify());
        let _ = std::fs::remove_dir_all(&dir);
    }
}
