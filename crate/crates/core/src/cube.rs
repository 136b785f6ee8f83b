//! Cubes over a small number of Boolean variables and sum-of-products covers.

use std::fmt;

/// A conjunction of literals: variable `i` is constrained iff bit `i` of
/// `care` is set, and then must equal bit `i` of `value`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    pub care: u32,
    pub value: u32,
}

impl Cube {
    /// The cube without literals.
    pub const TOP: Cube = Cube { care: 0, value: 0 };

    pub fn minterm(bits: u32, nvars: usize) -> Cube {
        let care = mask(nvars);
        Cube { care, value: bits & care }
    }

    pub fn contains(&self, bits: u32) -> bool {
        bits & self.care == self.value
    }

    pub fn literals(&self) -> u32 {
        self.care.count_ones()
    }

    /// Number of assignments over `nvars` variables in the cube.
    pub fn size(&self, nvars: usize) -> u64 {
        1u64 << (nvars as u32 - (self.care & mask(nvars)).count_ones())
    }

    /// All assignments over `nvars` variables in the cube, in increasing order.
    pub fn minterms(&self, nvars: usize) -> Vec<u32> {
        let free = !self.care & mask(nvars);
        let mut out = Vec::with_capacity(1 << free.count_ones());
        // Enumerate subsets of the free bits.
        let mut sub = 0u32;
        loop {
            out.push(self.value | sub);
            if sub == free {
                break;
            }
            sub = (sub.wrapping_sub(free)) & free;
        }
        out.sort_unstable();
        out
    }

    /// Lowest assignment in the cube.
    pub fn first(&self) -> u32 {
        self.value
    }

    /// Render with the given variable names, e.g. `a & !b`; `true` for the top cube.
    pub fn render(&self, names: &[String]) -> String {
        if self.care == 0 {
            return "true".to_string();
        }
        let mut parts = Vec::new();
        for (i, n) in names.iter().enumerate() {
            if self.care >> i & 1 == 1 {
                if self.value >> i & 1 == 1 {
                    parts.push(n.clone());
                } else {
                    parts.push(format!("!{n}"));
                }
            }
        }
        parts.join(" & ")
    }
}

impl fmt::Display for Cube {
    /// Positional notation over the care mask width, e.g. `1-0`, variable 0 first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = 32 - self.care.leading_zeros();
        for i in 0..width {
            let c = if self.care >> i & 1 == 0 {
                '-'
            } else if self.value >> i & 1 == 1 {
                '1'
            } else {
                '0'
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

pub fn mask(nvars: usize) -> u32 {
    if nvars >= 32 {
        u32::MAX
    } else {
        (1u32 << nvars) - 1
    }
}

/// True if some cube in the list contains `bits`.
pub fn covers(cubes: &[Cube], bits: u32) -> bool {
    cubes.iter().any(|c| c.contains(bits))
}

/// All prime implicants of the function whose on-set is `on` and whose
/// don't-care set is `dc` (Quine–McCluskey merging), sorted.
pub fn prime_implicants(on: &[u32], dc: &[u32], nvars: usize) -> Vec<Cube> {
    use std::collections::BTreeSet;
    let mut current: BTreeSet<Cube> = on.iter().chain(dc).map(|&m| Cube::minterm(m, nvars)).collect();
    let mut primes = BTreeSet::new();
    while !current.is_empty() {
        let mut next = BTreeSet::new();
        let mut merged = BTreeSet::new();
        let list: Vec<Cube> = current.iter().copied().collect();
        for c in &list {
            for i in 0..nvars {
                let bit = 1u32 << i;
                if c.care & bit == 0 || c.value & bit != 0 {
                    continue;
                }
                let partner = Cube { care: c.care, value: c.value | bit };
                if current.contains(&partner) {
                    merged.insert(*c);
                    merged.insert(partner);
                    next.insert(Cube { care: c.care & !bit, value: c.value });
                }
            }
        }
        for c in list {
            if !merged.contains(&c) {
                primes.insert(c);
            }
        }
        current = next;
    }
    // Keep only primes that touch the on-set.
    primes.into_iter().filter(|p| on.iter().any(|&m| p.contains(m))).collect()
}

/// A small sum-of-products cover of the set `on` (exact set over `nvars`
/// variables): prime implicants chosen greedily, essential ones first.
pub fn cover(on: &[u32], nvars: usize) -> Vec<Cube> {
    if on.is_empty() {
        return Vec::new();
    }
    if on.len() as u64 == 1u64 << nvars {
        return vec![Cube::TOP];
    }
    let primes = prime_implicants(on, &[], nvars);
    let mut uncovered: Vec<u32> = on.to_vec();
    uncovered.sort_unstable();
    uncovered.dedup();
    let mut chosen: Vec<Cube> = Vec::new();
    // Essential primes.
    for &m in &uncovered {
        let covering: Vec<&Cube> = primes.iter().filter(|p| p.contains(m)).collect();
        if covering.len() == 1 && !chosen.contains(covering[0]) {
            chosen.push(*covering[0]);
        }
    }
    uncovered.retain(|&m| !covers(&chosen, m));
    while !uncovered.is_empty() {
        let best = primes
            .iter()
            .filter(|p| !chosen.contains(p))
            .max_by(|a, b| {
                let ca = uncovered.iter().filter(|&&m| a.contains(m)).count();
                let cb = uncovered.iter().filter(|&&m| b.contains(m)).count();
                ca.cmp(&cb).then_with(|| b.literals().cmp(&a.literals())).then_with(|| b.cmp(a))
            })
            .copied()
            .expect("primes cover the on-set");
        chosen.push(best);
        uncovered.retain(|&m| !best.contains(m));
    }
    chosen.sort();
    chosen
}
