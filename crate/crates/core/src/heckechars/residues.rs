use std::collections::HashMap;

use crate::exactalg::QuadField;
use crate::quadideals::QuadIdeal;

/// Lookup table from residues modulo `modulus` to exponent tuples, built by
/// enumerating products of generator powers. Earlier tuples win, so with the
/// loops ordered lexicographically each residue gets its smallest tuple.
#[derive(Clone, Debug)]
pub(crate) struct ResidueTable {
    modulus: QuadIdeal,
    map: HashMap<(i64, i64), [u32; 3]>,
}

impl ResidueTable {
    pub(crate) fn build(field: QuadField, modulus: QuadIdeal, gens: &[((i64, i64), u32)]) -> Self {
        let mut map = HashMap::new();
        let mut ranges = [1u32; 3];
        for (k, &(_, ord)) in gens.iter().enumerate() {
            ranges[k] = ord;
        }
        let pw = |g: (i64, i64), e: u32| {
            let mut acc = (1, 0);
            for _ in 0..e {
                acc = modulus.reduce(field.mul_int(acc, g));
            }
            acc
        };
        let g = |k: usize| gens.get(k).map_or((1, 0), |x| x.0);
        for u in 0..ranges[0] {
            for v in 0..ranges[1] {
                for w in 0..ranges[2] {
                    let x = field.mul_int(field.mul_int(pw(g(0), u), pw(g(1), v)), pw(g(2), w));
                    map.entry(modulus.reduce(x)).or_insert([u, v, w]);
                }
            }
        }
        ResidueTable { modulus, map }
    }

    pub(crate) fn len(&self) -> usize {
        self.map.len()
    }

    pub(crate) fn lookup(&self, x: (i64, i64)) -> Option<[u32; 3]> {
        self.map.get(&self.modulus.reduce(x)).copied()
    }

    pub(crate) fn contains(&self, x: (i64, i64)) -> bool {
        self.lookup(x).is_some()
    }
}
