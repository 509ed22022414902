use super::coset::vertical_part;
use super::{
    add, combine, covering_witness, integer_solve, sub, to_i64, Coverage, CosetRingSet, IntLattice, LatticeAffineMap,
    LatticeCoset, LatticeError, LatticePiecewiseAffine, Piece,
};
use crate::scalar::Int;

fn project<T: Int>(c: &LatticeCoset<T>, split: usize) -> LatticeCoset<T> {
    let gens: Vec<Vec<T>> = c.lattice().basis().iter().map(|b| b[..split].to_vec()).collect();
    LatticeCoset::new(c.offset()[..split].to_vec(), IntLattice::canonicalize(split, &gens))
}

/// Two points of `piece` differing by a multiple of the vertical vector `v`.
fn vertical_witness<T: Int>(piece: &Piece<T>, v: &[T], split: usize) -> LatticeError {
    let p = piece.witness().expect("pieces are nonempty");
    let line = LatticeCoset::new(p.clone(), IntLattice::canonicalize(v.len(), &[v.to_vec()]));
    let at_p = line.relative(&LatticeCoset::point(p.clone()));
    let mut blocked = vec![at_p];
    for h in piece.holes() {
        if let Some(m) = line.intersect(h) {
            blocked.push(line.relative(&m));
        }
    }
    // The holes meet the line in arithmetic progressions or single points,
    // none containing p, so they cannot cover the rest of the line.
    let Coverage::Uncovered(k) = covering_witness(&blocked, 1) else {
        unreachable!("a punctured line is never covered by progressions avoiding the puncture")
    };
    let q = line.at(&k);
    LatticeError::NotAGraph { x: to_i64(&p[..split]), y1: to_i64(&p[split..]), y2: to_i64(&q[split..]) }
}

/// Writes `S ⊆ ℤ^{d+e}` (with `d = split`) as the graph of a piecewise-affine
/// map `α: Y ⊆ ℤ^d → ℤ^e`, with pieces `Y_i = K_i \ ⋃ N_ij` obtained by
/// projecting the disjoint pieces `L_i \ ⋃ M_ij` of `S`.
///
/// A piece whose lattice contains a nonzero `(0, t)` is never a graph: the
/// line through any of its points in direction `(0, t)` keeps a second point
/// outside the holes. Otherwise projection is injective on the piece, and
/// the only remaining failure is two pieces whose projections overlap.
pub fn graph_decompose<T: Int>(s: &CosetRingSet<T>, split: usize) -> Result<LatticePiecewiseAffine<T>, LatticeError> {
    let dim = s.dim();
    if split > dim {
        return Err(LatticeError::BadSplit { split, dim });
    }
    let e = dim - split;
    let mut out: Vec<(Piece<T>, LatticeAffineMap<T>)> = Vec::new();
    for piece in s.disjoint_pieces() {
        let l = piece.base();
        if let Some(v) = vertical_part(l.lattice(), split).first() {
            return Err(vertical_witness(&piece, v, split));
        }
        let bx: Vec<Vec<T>> = l.lattice().basis().iter().map(|b| b[..split].to_vec()).collect();
        let by: Vec<Vec<T>> = l.lattice().basis().iter().map(|b| b[split..].to_vec()).collect();
        let (ox, oy) = (&l.offset()[..split], &l.offset()[split..]);
        let domain = project(l, split);
        let sc = integer_solve(split, &bx, &sub(domain.offset(), ox)).expect("offset projects into domain");
        let image_offset = add(oy, &combine(e, &by, &sc));
        let linear = domain
            .lattice()
            .basis()
            .iter()
            .map(|b| combine(e, &by, &integer_solve(split, &bx, b).expect("basis projects into domain")))
            .collect();
        let map = LatticeAffineMap::new(domain.clone(), image_offset, linear);
        let region = Piece::new(domain, piece.holes().iter().map(|h| project(h, split)));
        out.push((region, map));
    }
    for i in 0..out.len() {
        for j in i + 1..out.len() {
            if let Some(x) = out[i].0.intersect(&out[j].0).and_then(|p| p.witness()) {
                let y1 = out[i].1.evaluate(&x).expect("inside domain");
                let y2 = out[j].1.evaluate(&x).expect("inside domain");
                return Err(LatticeError::NotAGraph { x: to_i64(&x), y1: to_i64(&y1), y2: to_i64(&y2) });
            }
        }
    }
    LatticePiecewiseAffine::new(split, e, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coset(offset: &[i64], gens: &[&[i64]]) -> LatticeCoset<i64> {
        let d = offset.len();
        let cols: Vec<Vec<i64>> = gens.iter().map(|g| g.to_vec()).collect();
        LatticeCoset::new(offset.to_vec(), IntLattice::canonicalize(d, &cols))
    }

    fn set(pieces: Vec<Piece<i64>>) -> CosetRingSet<i64> {
        CosetRingSet::new(pieces[0].dim(), pieces).unwrap()
    }

    #[test]
    fn diagonal_and_shift() {
        let diag = graph_decompose(&set(vec![Piece::coset(coset(&[0, 0], &[&[1, 1]]))]), 1).unwrap();
        assert_eq!(diag.pieces().len(), 1);
        for n in -10..=10 {
            assert_eq!(diag.evaluate(&[n]).unwrap(), Some(vec![n]));
        }
        let shift = graph_decompose(&set(vec![Piece::coset(coset(&[0, 1], &[&[1, 1]]))]), 1).unwrap();
        for n in -10..=10 {
            assert_eq!(shift.evaluate(&[n]).unwrap(), Some(vec![n + 1]));
        }
    }

    #[test]
    fn even_odd_has_two_pieces() {
        let s = set(vec![
            Piece::coset(coset(&[0, 0], &[&[2, 2]])),
            Piece::coset(coset(&[1, 2], &[&[2, 2]])),
        ]);
        let pa = graph_decompose(&s, 1).unwrap();
        assert_eq!(pa.pieces().len(), 2);
        let domains: Vec<LatticeCoset<i64>> = pa.pieces().iter().map(|(r, _)| r.base().clone()).collect();
        assert!(domains.contains(&coset(&[0], &[&[2]])));
        assert!(domains.contains(&coset(&[1], &[&[2]])));
        for n in -20..=20 {
            let want = if n % 2 == 0 { n } else { n + 1 };
            assert_eq!(pa.evaluate(&[n]).unwrap(), Some(vec![want]));
        }
    }

    #[test]
    fn halving_graph() {
        // {(2n, n)}: domain 2ℤ, not expressible by an integer matrix on ℤ
        let pa = graph_decompose(&set(vec![Piece::coset(coset(&[0, 0], &[&[2, 1]]))]), 1).unwrap();
        assert_eq!(pa.evaluate(&[8]).unwrap(), Some(vec![4]));
        assert_eq!(pa.evaluate(&[7]).unwrap(), None);
    }

    #[test]
    fn vertical_lattice_rejected() {
        let s = set(vec![Piece::new(coset(&[0, 0], &[&[1, 0], &[0, 3]]), [coset(&[0, 0], &[&[1, 1]])])]);
        match graph_decompose(&s, 1) {
            Err(LatticeError::NotAGraph { x, y1, y2 }) => {
                assert_ne!(y1, y2);
                assert!(s.contains(&[x[0], y1[0]]).unwrap());
                assert!(s.contains(&[x[0], y2[0]]).unwrap());
            }
            other => panic!("expected NotAGraph, got {other:?}"),
        }
    }

    #[test]
    fn holes_can_absorb_a_vertical_piece() {
        // the column {0} × ℤ minus its even and odd halves is empty
        let s = set(vec![
            Piece::new(coset(&[0, 0], &[&[0, 1]]), [coset(&[0, 0], &[&[0, 2]]), coset(&[0, 1], &[&[0, 2]])]),
            Piece::coset(coset(&[0, 0], &[&[1, 1]])),
        ]);
        let pa = graph_decompose(&s, 1).unwrap();
        assert_eq!(pa.evaluate(&[5]).unwrap(), Some(vec![5]));
    }

    #[test]
    fn overlapping_projections_rejected() {
        let s = set(vec![Piece::coset(coset(&[0, 0], &[&[1, 1]])), Piece::coset(coset(&[0, 0], &[&[2, 0]]))]);
        match graph_decompose(&s, 1) {
            Err(LatticeError::NotAGraph { x, y1, y2 }) => {
                assert_ne!(y1, y2);
                assert!(s.contains(&[x[0], y1[0]]).unwrap());
                assert!(s.contains(&[x[0], y2[0]]).unwrap());
            }
            other => panic!("expected NotAGraph, got {other:?}"),
        }
    }

    #[test]
    fn overlapping_inputs_describing_one_graph_are_fine() {
        let s = set(vec![Piece::coset(coset(&[0, 0], &[&[1, 1]])), Piece::coset(coset(&[0, 0], &[&[2, 2]]))]);
        let pa = graph_decompose(&s, 1).unwrap();
        for n in -9..=9 {
            assert_eq!(pa.evaluate(&[n]).unwrap(), Some(vec![n]));
        }
    }
}
