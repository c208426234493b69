use std::cmp::Ordering;

/// A monomial over a fixed, ordered variable universe, stored densely as one
/// exponent per variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn from_exps(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    /// `x_i^k`.
    pub fn var(nvars: usize, i: usize, k: u32) -> Self {
        let mut m = Monomial::one(nvars);
        m.0[i] = k;
        m
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Variables with a positive exponent, as `(index, exponent)`.
    pub fn support(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: u32) -> Monomial {
        Monomial(self.0.iter().map(|&e| e * k).collect())
    }

    /// Divide every exponent by `k`, if all are divisible.
    pub fn exact_div(&self, k: u32) -> Option<Monomial> {
        if self.0.iter().all(|&e| e % k == 0) {
            Some(Monomial(self.0.iter().map(|&e| e / k).collect()))
        } else {
            None
        }
    }
}

/// Graded lexicographic: total degree first, then the exponent of the first
/// variable, and so on.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Render `x^2*y` style text for the given variable names.
pub fn format_monomial(m: &Monomial, vars: &[String]) -> String {
    let parts: Vec<String> = m
        .support()
        .map(|(i, e)| {
            if e == 1 {
                vars[i].clone()
            } else {
                format!("{}^{}", vars[i], e)
            }
        })
        .collect();
    parts.join("*")
}
