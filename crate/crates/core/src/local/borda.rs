//! Borda count over per-metric candidate rankings.

use super::LocalError;

/// A candidate and its Borda score.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Scored {
    pub node: usize,
    pub score: usize,
}

/// Aggregates rankings (best first) over a common candidate set.
///
/// A candidate at 1-based position `rank` in a ranking of `c` candidates
/// earns `c - rank` points. The result is sorted by score descending, then
/// node index ascending.
pub fn borda_aggregate(rankings: &[Vec<usize>]) -> Result<Vec<Scored>, LocalError> {
    let first = rankings.first().ok_or(LocalError::EmptyRanking)?;
    if first.is_empty() {
        return Err(LocalError::EmptyRanking);
    }
    let mut candidates = first.clone();
    candidates.sort_unstable();
    if candidates.windows(2).any(|w| w[0] == w[1]) {
        return Err(LocalError::MismatchedRankings);
    }
    let c = candidates.len();
    let mut scores = vec![0usize; c];
    for ranking in rankings {
        if ranking.len() != c {
            return Err(LocalError::MismatchedRankings);
        }
        let mut seen = vec![false; c];
        for (pos, node) in ranking.iter().enumerate() {
            let slot = candidates
                .binary_search(node)
                .map_err(|_| LocalError::MismatchedRankings)?;
            if std::mem::replace(&mut seen[slot], true) {
                return Err(LocalError::MismatchedRankings);
            }
            scores[slot] += c - (pos + 1);
        }
    }
    let mut out: Vec<Scored> = candidates
        .into_iter()
        .zip(scores)
        .map(|(node, score)| Scored { node, score })
        .collect();
    out.sort_by(|a, b| b.score.cmp(&a.score).then(a.node.cmp(&b.node)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_metrics_three_candidates() {
        let (x, y, z) = (10, 20, 30);
        let out = borda_aggregate(&[vec![x, y, z], vec![y, x, z], vec![x, z, y]]).unwrap();
        assert_eq!(
            out,
            vec![
                Scored { node: x, score: 5 },
                Scored { node: y, score: 3 },
                Scored { node: z, score: 1 },
            ]
        );
    }

    #[test]
    fn single_candidate_scores_zero() {
        let out = borda_aggregate(&[vec![4], vec![4], vec![4]]).unwrap();
        assert_eq!(out, vec![Scored { node: 4, score: 0 }]);
    }

    #[test]
    fn opposed_orders_tie_to_lower_index() {
        let out = borda_aggregate(&[vec![9, 2], vec![2, 9]]).unwrap();
        assert_eq!(out[0], Scored { node: 2, score: 1 });
        assert_eq!(out[1], Scored { node: 9, score: 1 });
    }

    #[test]
    fn mismatched_sets() {
        assert_eq!(
            borda_aggregate(&[vec![1, 2], vec![1, 3]]),
            Err(LocalError::MismatchedRankings)
        );
        assert_eq!(
            borda_aggregate(&[vec![1, 2], vec![1]]),
            Err(LocalError::MismatchedRankings)
        );
        assert_eq!(
            borda_aggregate(&[vec![1, 1], vec![1, 1]]),
            Err(LocalError::MismatchedRankings)
        );
        assert_eq!(borda_aggregate(&[]), Err(LocalError::EmptyRanking));
    }
}
