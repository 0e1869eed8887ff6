//! Arithmetic in `Z_v` for odd `v`: the unit group, subgroups of it, and the
//! orbits those subgroups cut out of `Z_v` under multiplication.
//!
//! Orbits are labelled by their minimal element and listed in ascending
//! label order, so orbit `{0}` always comes first and `H·1 = H` second.

use std::fmt;

use crate::error::{Error, Result};

/// An odd modulus `v >= 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModRing {
    v: usize,
}

impl ModRing {
    pub fn new(v: usize) -> Result<Self> {
        if v < 3 || v % 2 == 0 {
            return Err(Error::InvalidModulus(v));
        }
        Ok(ModRing { v })
    }

    pub fn modulus(&self) -> usize {
        self.v
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        (x * y) % self.v
    }

    pub fn neg(&self, x: usize) -> usize {
        (self.v - x % self.v) % self.v
    }
}

pub fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Prime factorisation by trial division, as `(prime, exponent)` pairs.
pub fn factorize(mut n: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: usize) -> usize {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: usize) -> Vec<usize> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// The units of `Z_v`, ascending. Its length is `φ(v)`.
pub fn unit_group(v: usize) -> Result<Vec<usize>> {
    ModRing::new(v)?;
    Ok((1..v).filter(|&k| gcd(k, v) == 1).collect())
}

/// A subgroup of the unit group `Z_v*`, stored as its sorted element list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    ring: ModRing,
    elements: Vec<usize>,
}

impl Subgroup {
    /// The subgroup generated by `gens`: the closure under multiplication.
    pub fn from_generators(v: usize, gens: &[usize]) -> Result<Self> {
        let ring = ModRing::new(v)?;
        let mut gens_reduced = Vec::with_capacity(gens.len());
        for &g in gens {
            let r = g % v;
            if gcd(r, v) != 1 {
                return Err(Error::NotAUnit { v, generator: g });
            }
            gens_reduced.push(r);
        }

        let mut member = vec![false; v];
        member[1] = true;
        let mut elements = vec![1];
        // Multiply every new element by each generator until nothing changes.
        let mut frontier = 0;
        while frontier < elements.len() {
            let x = elements[frontier];
            frontier += 1;
            for &g in &gens_reduced {
                let y = ring.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    elements.push(y);
                }
            }
        }
        elements.sort_unstable();
        Ok(Subgroup { ring, elements })
    }

    /// The trivial subgroup `{1}`.
    pub fn trivial(v: usize) -> Result<Self> {
        Self::from_generators(v, &[])
    }

    pub fn modulus(&self) -> usize {
        self.ring.modulus()
    }

    pub fn ring(&self) -> ModRing {
        self.ring
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&(x % self.modulus())).is_ok()
    }

    /// `H* = H ∪ (−1)H`, the subgroup generated by `H` and `v − 1`.
    pub fn extend_with_negation(&self) -> Subgroup {
        let v = self.modulus();
        if self.contains(v - 1) {
            return self.clone();
        }
        let mut elements: Vec<usize> = self.elements.iter().flat_map(|&h| [h, v - h]).collect();
        elements.sort_unstable();
        Subgroup {
            ring: self.ring,
            elements,
        }
    }

    /// The orbit `H·k`, sorted.
    pub fn orbit_of(&self, k: usize) -> Vec<usize> {
        let mut o: Vec<usize> = self.elements.iter().map(|&h| self.ring.mul(h, k)).collect();
        o.sort_unstable();
        o.dedup();
        o
    }
}

/// The orbit partition of `Z_v` under multiplication by a subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSystem {
    subgroup: Subgroup,
    orbits: Vec<Vec<usize>>,
    /// `position[k]` is the index into `orbits` of the orbit holding `k`.
    position: Vec<usize>,
}

impl OrbitSystem {
    pub fn new(subgroup: Subgroup) -> Self {
        let v = subgroup.modulus();
        let mut position = vec![usize::MAX; v];
        let mut orbits = Vec::new();
        for k in 0..v {
            if position[k] != usize::MAX {
                continue;
            }
            let orbit = subgroup.orbit_of(k);
            for &x in &orbit {
                position[x] = orbits.len();
            }
            orbits.push(orbit);
        }
        OrbitSystem {
            subgroup,
            orbits,
            position,
        }
    }

    pub fn from_generators(v: usize, gens: &[usize]) -> Result<Self> {
        Ok(Self::new(Subgroup::from_generators(v, gens)?))
    }

    pub fn modulus(&self) -> usize {
        self.subgroup.modulus()
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    /// Number of orbits, including `{0}`.
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    /// Minimal elements of all orbits, ascending.
    pub fn representatives(&self) -> impl Iterator<Item = usize> + '_ {
        self.orbits.iter().map(|o| o[0])
    }

    pub fn nonzero_representatives(&self) -> Vec<usize> {
        self.representatives().skip(1).collect()
    }

    /// The orbit through `k` (any element, not only a representative).
    pub fn orbit_through(&self, k: usize) -> &[usize] {
        &self.orbits[self.position[k % self.modulus()]]
    }

    pub fn representative_of(&self, k: usize) -> usize {
        self.orbit_through(k)[0]
    }

    /// `∪_{j ∈ labels} H·j`, sorted.
    pub fn union_of(&self, labels: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.modulus()];
        for &j in labels {
            for &x in self.orbit_through(j) {
                member[x] = true;
            }
        }
        (0..self.modulus()).filter(|&i| member[i]).collect()
    }

    /// The orbit labels making up `set`, or the first element of an orbit
    /// that `set` only partially covers.
    pub fn labels_of(&self, set: &[usize]) -> Result<Vec<usize>> {
        let v = self.modulus();
        let mut member = vec![false; v];
        for &x in set {
            if x >= v {
                return Err(Error::IndexOutOfRange { v, index: x });
            }
            member[x] = true;
        }
        let mut labels = Vec::new();
        for orbit in &self.orbits {
            let inside = orbit.iter().filter(|&&x| member[x]).count();
            if inside == orbit.len() {
                labels.push(orbit[0]);
            } else if inside > 0 {
                let index = *orbit.iter().find(|&&x| member[x]).unwrap();
                let image = *orbit.iter().find(|&&x| !member[x]).unwrap();
                return Err(Error::NotOrbitClosed { index, image });
            }
        }
        Ok(labels)
    }

    /// The same decomposition for `H* = H ∪ (−1)H`.
    pub fn with_negation(&self) -> OrbitSystem {
        OrbitSystem::new(self.subgroup.extend_with_negation())
    }
}

pub fn orbit_decomposition(subgroup: &Subgroup) -> OrbitSystem {
    OrbitSystem::new(subgroup.clone())
}

impl fmt::Display for OrbitSystem {
    /// One `H.j = {…}` line per orbit.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for orbit in &self.orbits {
            let body: Vec<String> = orbit.iter().map(|x| x.to_string()).collect();
            writeln!(f, "H.{} = {{{}}}", orbit[0], body.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_group_small() {
        assert_eq!(unit_group(7).unwrap(), vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(unit_group(9).unwrap(), vec![1, 2, 4, 5, 7, 8]);
        assert_eq!(unit_group(131).unwrap().len(), 130);
        assert_eq!(euler_phi(131), 130);
        assert_eq!(euler_phi(93), 60);
    }

    #[test]
    fn unit_group_rejects_bad_moduli() {
        assert!(matches!(unit_group(8), Err(Error::InvalidModulus(8))));
        assert!(matches!(unit_group(1), Err(Error::InvalidModulus(1))));
    }

    #[test]
    fn subgroups_from_generators() {
        let h = Subgroup::from_generators(131, &[53]).unwrap();
        assert_eq!(h.elements(), &[1, 53, 58, 61, 89]);
        let h = Subgroup::from_generators(93, &[25]).unwrap();
        assert_eq!(h.elements(), &[1, 25, 67]);
        let h = Subgroup::from_generators(7, &[1]).unwrap();
        assert_eq!(h.order(), 1);
    }

    #[test]
    fn non_unit_generator_named() {
        match Subgroup::from_generators(93, &[25, 31]) {
            Err(Error::NotAUnit { generator, .. }) => assert_eq!(generator, 31),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negation_extension() {
        let h = Subgroup::from_generators(131, &[53]).unwrap();
        let hs = h.extend_with_negation();
        assert_eq!(hs.elements(), &[1, 42, 53, 58, 61, 70, 73, 78, 89, 130]);
        assert_eq!(hs.extend_with_negation(), hs);
        assert_eq!(
            Subgroup::trivial(5)
                .unwrap()
                .extend_with_negation()
                .elements(),
            &[1, 4]
        );
    }

    #[test]
    fn orbits_v93() {
        let sys = OrbitSystem::from_generators(93, &[25]).unwrap();
        assert_eq!(sys.len(), 33);
        assert_eq!(sys.orbit_through(2), &[2, 41, 50]);
        assert_eq!(sys.orbit_through(31), &[31]);
        assert_eq!(sys.orbit_through(62), &[62]);
        assert_eq!(sys.orbits()[0], vec![0]);
        // Labels printed in the published orbit table.
        let labels: Vec<usize> = sys.representatives().collect();
        assert_eq!(
            labels,
            vec![
                0, 1, 2, 3, 4, 5, 6, 8, 9, 10, 11, 12, 13, 16, 17, 18, 20, 22, 24, 26, 29, 31, 33,
                36, 37, 40, 43, 44, 47, 48, 51, 55, 62
            ]
        );
    }

    #[test]
    fn orbits_v131() {
        let sys = OrbitSystem::from_generators(131, &[53]).unwrap();
        assert_eq!(sys.len(), 27);
        assert!(sys.orbits()[1..].iter().all(|o| o.len() == 5));
        assert_eq!(sys.with_negation().len(), 14);
    }

    #[test]
    fn trivial_action_gives_singletons() {
        let sys = OrbitSystem::new(Subgroup::trivial(11).unwrap());
        assert_eq!(sys.len(), 11);
    }

    #[test]
    fn labels_roundtrip_and_closure_error() {
        let sys = OrbitSystem::from_generators(13, &[3]).unwrap();
        let x = sys.union_of(&[1, 7]);
        assert_eq!(x, vec![1, 3, 7, 8, 9, 11]);
        assert_eq!(sys.labels_of(&x).unwrap(), vec![1, 7]);
        assert!(matches!(
            sys.labels_of(&[1, 3]),
            Err(Error::NotOrbitClosed { index: 1, image: 9 })
        ));
    }

    #[test]
    fn display_layout() {
        let sys = OrbitSystem::from_generators(7, &[2]).unwrap();
        assert_eq!(sys.to_string(), "H.0 = {0}\nH.1 = {1,2,4}\nH.3 = {3,5,6}\n");
    }

    #[test]
    fn divisors_and_primes() {
        assert_eq!(divisors(93), vec![1, 3, 31, 93]);
        assert_eq!(divisors(121), vec![1, 11, 121]);
        assert!(is_prime(131) && !is_prime(121) && !is_prime(1));
    }
}
