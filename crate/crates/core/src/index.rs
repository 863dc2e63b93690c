//! Approximate lookup of pairs `(x, x◊)` by fingerprint: the point's
//! coordinates followed by the dual's values on a probe set.

use crate::conjugate::PairedPoint;
use crate::dual::{dual_equal_on, DualVector, ProbeSet};
use crate::error::Result;
use crate::geometry::{Point, SpaceHandle, SpaceKind};

#[derive(Clone, Debug)]
pub struct PairIndex {
    space: SpaceHandle,
    probes: ProbeSet,
    tol: f64,
    // sorted by first key component, then input position
    keys: Vec<(Vec<f64>, usize)>,
    pairs: Vec<PairedPoint>,
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

impl PairIndex {
    /// Indexes `pairs`; `context` lists further pairs that will be looked up
    /// later so the probe set can separate them.
    pub fn new(space: SpaceHandle, pairs: &[PairedPoint], context: &[&PairedPoint], tol: f64) -> Result<Self> {
        let probes = ProbeSet::for_duals(&space, pairs.iter().map(|q| &q.xd).chain(context.iter().map(|q| &q.xd)));
        let mut index = Self {
            space,
            probes,
            tol,
            keys: Vec::with_capacity(pairs.len()),
            pairs: pairs.to_vec(),
        };
        for (i, q) in pairs.iter().enumerate() {
            let fp = index.fingerprint(q)?;
            index.keys.push((fp, i));
        }
        index.keys.sort_by(|a, b| a.0[0].total_cmp(&b.0[0]).then(a.1.cmp(&b.1)));
        Ok(index)
    }

    pub fn probes(&self) -> &ProbeSet {
        &self.probes
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn point_fingerprint(&self, x: &Point) -> Vec<f64> {
        let mut out = Vec::new();
        x.fingerprint(&mut out);
        out
    }

    pub fn dual_fingerprint(&self, xd: &DualVector) -> Result<Vec<f64>> {
        xd.probe_values(&self.probes)
    }

    pub fn fingerprint(&self, q: &PairedPoint) -> Result<Vec<f64>> {
        let mut fp = self.point_fingerprint(&q.x);
        fp.extend(self.dual_fingerprint(&q.xd)?);
        Ok(fp)
    }

    /// Candidates whose fingerprint matches, in input order.
    fn matches(&self, fp: &[f64]) -> Vec<usize> {
        let lead = fp[0];
        let start = self
            .keys
            .partition_point(|(k, _)| k[0] < lead && !close(k[0], lead, self.tol));
        let mut found: Vec<usize> = self.keys[start..]
            .iter()
            .take_while(|(k, _)| k[0] <= lead || close(k[0], lead, self.tol))
            .filter(|(k, _)| k.len() == fp.len() && k.iter().zip(fp).all(|(a, b)| close(*a, *b, self.tol)))
            .map(|(_, i)| *i)
            .collect();
        found.sort_unstable();
        found
    }

    /// First indexed pair matching a fingerprint. The ℝ-tree probe set is
    /// exact only for duals it was built from, so there candidates are
    /// confirmed against `q` when it is given.
    pub fn find_fingerprint(&self, fp: &[f64], q: Option<&PairedPoint>) -> Result<Option<usize>> {
        for i in self.matches(fp) {
            match (self.space.kind, q) {
                (SpaceKind::RTree, Some(q)) => {
                    let cand = &self.pairs[i].xd;
                    let local = ProbeSet::for_duals(&self.space, [cand, &q.xd]);
                    if dual_equal_on(cand, &q.xd, &local, self.tol)? {
                        return Ok(Some(i));
                    }
                }
                _ => return Ok(Some(i)),
            }
        }
        Ok(None)
    }

    pub fn find(&self, q: &PairedPoint) -> Result<Option<usize>> {
        let fp = self.fingerprint(q)?;
        self.find_fingerprint(&fp, Some(q))
    }
}
