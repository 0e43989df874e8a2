//! Sparse Pauli operators without phase: X- and Z-supports as sorted qubit lists.

use serde::Serialize;
use std::fmt;

fn sym_diff(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn intersection(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn overlap_parity(a: &[usize], b: &[usize]) -> bool {
    intersection(a, b).len() % 2 == 1
}

/// Sorts and reduces a multiset modulo 2.
pub fn mod2(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    let mut out: Vec<usize> = Vec::with_capacity(v.len());
    for q in v {
        if out.last() == Some(&q) {
            out.pop();
        } else {
            out.push(q);
        }
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct PauliOperator {
    x: Vec<usize>,
    z: Vec<usize>,
}

impl PauliOperator {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Builds an operator; repeated qubits cancel in pairs.
    pub fn new(x: impl IntoIterator<Item = usize>, z: impl IntoIterator<Item = usize>) -> Self {
        PauliOperator { x: mod2(x.into_iter().collect()), z: mod2(z.into_iter().collect()) }
    }

    pub fn x_on(qubits: impl IntoIterator<Item = usize>) -> Self {
        Self::new(qubits, [])
    }

    pub fn z_on(qubits: impl IntoIterator<Item = usize>) -> Self {
        Self::new([], qubits)
    }

    pub fn x_support(&self) -> &[usize] {
        &self.x
    }

    pub fn z_support(&self) -> &[usize] {
        &self.z
    }

    /// Qubits carrying Y (X and Z both present).
    pub fn y_support(&self) -> Vec<usize> {
        intersection(&self.x, &self.z)
    }

    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.x.iter().chain(&self.z).copied().collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn weight(&self) -> usize {
        self.support().len()
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_empty() && self.z.is_empty()
    }

    /// Local action at qubit `q`: 'I', 'X', 'Y' or 'Z'.
    pub fn at(&self, q: usize) -> char {
        match (self.x.binary_search(&q).is_ok(), self.z.binary_search(&q).is_ok()) {
            (false, false) => 'I',
            (true, false) => 'X',
            (false, true) => 'Z',
            (true, true) => 'Y',
        }
    }

    /// Product up to phase.
    pub fn mul(&self, other: &PauliOperator) -> PauliOperator {
        PauliOperator { x: sym_diff(&self.x, &other.x), z: sym_diff(&self.z, &other.z) }
    }

    /// Symplectic form |x1 ∩ z2| + |z1 ∩ x2| mod 2 (true = anticommute).
    pub fn symplectic(&self, other: &PauliOperator) -> bool {
        overlap_parity(&self.x, &other.z) ^ overlap_parity(&self.z, &other.x)
    }

    pub fn commutes_with(&self, other: &PauliOperator) -> bool {
        !self.symplectic(other)
    }

    pub fn product<'a>(ops: impl IntoIterator<Item = &'a PauliOperator>) -> PauliOperator {
        ops.into_iter().fold(PauliOperator::identity(), |acc, o| acc.mul(o))
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("I");
        }
        let parts: Vec<String> = self.support().into_iter().map(|q| format!("{}{}", self.at(q), q)).collect();
        f.write_str(&parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_op() -> impl Strategy<Value = PauliOperator> {
        (prop::collection::vec(0usize..20, 0..10), prop::collection::vec(0usize..20, 0..10))
            .prop_map(|(x, z)| PauliOperator::new(x, z))
    }

    #[test]
    fn single_qubit_relations() {
        let x = PauliOperator::x_on([3]);
        let z = PauliOperator::z_on([3]);
        assert!(!x.commutes_with(&z));
        assert_eq!(x.mul(&z).y_support(), vec![3]);
        assert_eq!(x.mul(&z).at(3), 'Y');
        assert!(PauliOperator::z_on([4]).commutes_with(&x));
    }

    #[test]
    fn repeated_qubits_cancel() {
        assert!(PauliOperator::x_on([1, 2, 1, 2]).is_identity());
    }

    proptest! {
        #[test]
        fn product_is_involutive(a in arb_op(), b in arb_op()) {
            prop_assert_eq!(a.mul(&b).mul(&b), a.clone());
            prop_assert!(a.mul(&a).is_identity());
        }

        #[test]
        fn symplectic_is_bilinear(a in arb_op(), b in arb_op(), c in arb_op()) {
            prop_assert_eq!(a.symplectic(&b.mul(&c)), a.symplectic(&b) ^ a.symplectic(&c));
            prop_assert_eq!(a.symplectic(&b), b.symplectic(&a));
            prop_assert!(!a.symplectic(&a));
        }
    }
}
