use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::RankError;
use crate::ranked::RankedList;

/// One fused result with the ranks and scores that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HybridResult {
    pub doc_id: String,
    pub borda_points: u64,
    pub heading_rank: usize,
    pub content_rank: usize,
    pub final_rank: usize,
    pub heading_score: f64,
    pub content_score: f64,
}

/// Borda count over the heading and content rankings.
///
/// With `n` documents, position `p` (1-based) earns `n - p` points in each
/// list. Totals sort descending; ties go to the better heading rank, then to
/// the smaller doc id.
pub fn borda_aggregate(heading: &RankedList, content: &RankedList) -> Result<Vec<HybridResult>, RankError> {
    let n = heading.len();
    if content.len() != n {
        return Err(RankError::RankMismatch(format!(
            "heading list has {n} documents, content list has {}",
            content.len()
        )));
    }

    let mut content_pos: HashMap<&str, (usize, f64)> = HashMap::with_capacity(n);
    for (i, e) in content.entries().iter().enumerate() {
        if content_pos.insert(e.doc_id.as_str(), (i + 1, e.score)).is_some() {
            return Err(RankError::RankMismatch(format!(
                "{:?} repeats in the content list",
                e.doc_id
            )));
        }
    }

    let mut fused = Vec::with_capacity(n);
    for (i, e) in heading.entries().iter().enumerate() {
        let heading_rank = i + 1;
        let Some((content_rank, content_score)) = content_pos.remove(e.doc_id.as_str()) else {
            return Err(RankError::RankMismatch(format!(
                "{:?} is missing from the content list or repeats in the heading list",
                e.doc_id
            )));
        };
        fused.push(HybridResult {
            doc_id: e.doc_id.clone(),
            borda_points: ((n - heading_rank) + (n - content_rank)) as u64,
            heading_rank,
            content_rank,
            final_rank: 0,
            heading_score: e.score,
            content_score,
        });
    }

    fused.sort_by(|a, b| {
        b.borda_points
            .cmp(&a.borda_points)
            .then(a.heading_rank.cmp(&b.heading_rank))
            .then_with(|| a.doc_id.cmp(&b.doc_id))
    });
    for (i, r) in fused.iter_mut().enumerate() {
        r.final_rank = i + 1;
    }
    Ok(fused)
}
