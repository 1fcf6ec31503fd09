//! Minimum-weight matching on a repetition-code defect graph.
//!
//! Each decoding graph is a line of two stabilizer walls per round plus
//! time-like edges. A defect is a fired detector at coordinates
//! (round, wall). Matching pairs defects at cost |dr| + |dwall|, or
//! retires a defect to its near space boundary at cost 1. The matched
//! correction flips the protected logical parity once per matched pair
//! whose endpoints lie on different walls (the implied error chain
//! crosses the logical's central row or column).
//!
//! Matching is exact (subset dynamic program) up to a defect-count limit,
//! and falls back to a greedy sweep beyond it; shots that noisy are far
//! outside the regime where decoding accuracy matters.

/// One fired detector in a decoding graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Defect {
    pub round: usize,
    /// 0 or 1: which of the two stabilizer walls fired.
    pub wall: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Matching {
    pub cost: u32,
    /// Whether the matched correction flips the logical parity.
    pub flip: bool,
}

/// Largest defect count decoded exactly.
pub const EXACT_LIMIT: usize = 20;

fn pair_cost(a: &Defect, b: &Defect) -> u32 {
    (a.round.abs_diff(b.round) + a.wall.abs_diff(b.wall)) as u32
}

/// Decode one graph's defects into a sign correction.
pub fn decode(defects: &[Defect]) -> Matching {
    if defects.len() <= EXACT_LIMIT {
        exact(defects)
    } else {
        greedy(defects)
    }
}

fn exact(d: &[Defect]) -> Matching {
    let n = d.len();
    if n == 0 {
        return Matching { cost: 0, flip: false };
    }
    let full = (1usize << n) - 1;
    let mut cost = vec![u32::MAX; full + 1];
    let mut flip = vec![false; full + 1];
    cost[0] = 0;
    for mask in 1..=full {
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        // retire to the near space boundary
        let mut best = (cost[rest].saturating_add(1), flip[rest]);
        // or pair with any other defect still unmatched
        let mut jm = rest;
        while jm != 0 {
            let j = jm.trailing_zeros() as usize;
            jm &= jm - 1;
            let sub = rest & !(1 << j);
            let c = cost[sub].saturating_add(pair_cost(&d[i], &d[j]));
            let f = flip[sub] ^ (d[i].wall != d[j].wall);
            // ties resolve to the non-flipping matching, deterministically
            if c < best.0 || (c == best.0 && best.1 && !f) {
                best = (c, f);
            }
        }
        cost[mask] = best.0;
        flip[mask] = best.1;
    }
    Matching { cost: cost[full], flip: flip[full] }
}

fn greedy(d: &[Defect]) -> Matching {
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.sort_by_key(|&i| (d[i].round, d[i].wall));
    let mut cost = 0u32;
    let mut flip = false;
    let mut k = 0;
    while k < order.len() {
        if k + 1 < order.len() {
            let (a, b) = (&d[order[k]], &d[order[k + 1]]);
            let c = pair_cost(a, b);
            if c < 2 {
                cost += c;
                flip ^= a.wall != b.wall;
                k += 2;
                continue;
            }
        }
        cost += 1;
        k += 1;
    }
    Matching { cost, flip }
}
