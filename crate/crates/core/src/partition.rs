//! Splitting a set of atoms into two parts of unequal mass.

/// Finds `A ⊂ atoms` with `0 < m(A) < m(atoms \ A)`, the strict inequality
/// holding with a margin of `1e-12` times the total mass.
///
/// Single atoms are tried first, smallest mass first; then every subset
/// when there are at most 12 atoms; beyond that a greedy split that adds
/// atoms in ascending mass order while the part stays below half.
pub(crate) fn unequal_split(atoms: &[(usize, f64)]) -> Option<Vec<usize>> {
    let total: f64 = atoms.iter().map(|&(_, m)| m).sum();
    let margin = 1e-12 * total;
    let valid = |m: f64| m > 0.0 && m < total - m - margin;

    let mut sorted = atoms.to_vec();
    sorted.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    if let Some(&(i, _)) = sorted.iter().find(|&&(_, m)| valid(m)) {
        return Some(vec![i]);
    }

    if atoms.len() <= 12 {
        for mask in 1u32..(1u32 << atoms.len()) {
            let mass: f64 = (0..atoms.len()).filter(|b| mask >> b & 1 == 1).map(|b| atoms[b].1).sum();
            if valid(mass) {
                return Some((0..atoms.len()).filter(|b| mask >> b & 1 == 1).map(|b| atoms[b].0).collect());
            }
        }
        return None;
    }

    let mut part = Vec::new();
    let mut mass = 0.0;
    for &(i, m) in &sorted {
        if valid(mass + m) {
            part.push(i);
            mass += m;
        }
    }
    (!part.is_empty()).then_some(part)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_single_atom_wins() {
        assert_eq!(unequal_split(&[(0, 3.0), (1, 1.0), (2, 2.0)]), Some(vec![1]));
        assert_eq!(unequal_split(&[(4, 1.0), (7, 8.0)]), Some(vec![4]));
    }

    #[test]
    fn ties_between_first_indices() {
        assert_eq!(unequal_split(&[(0, 1.0), (1, 1.0), (2, 1.0)]), Some(vec![0]));
    }

    #[test]
    fn equal_pair_has_no_split() {
        assert_eq!(unequal_split(&[(0, 2.0), (1, 2.0)]), None);
        assert_eq!(unequal_split(&[(0, 2.0)]), None);
        assert_eq!(unequal_split(&[(0, 1.0), (1, 1.0 + 1e-14)]), None);
    }

    #[test]
    fn many_atoms() {
        let atoms: Vec<_> = (0..20).map(|i| (i, 1.0 + i as f64)).collect();
        let part = unequal_split(&atoms).unwrap();
        assert_eq!(part, vec![0]);
    }
}
