use alloc::vec::Vec;

/// A maximal stretch of equal labels. Indices are taken modulo the sequence
/// length, so a run in a cyclic sequence may wrap past the end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Run {
    pub start: usize,
    pub len: usize,
    pub label: i8,
}

impl Run {
    pub fn last(&self, n: usize) -> usize {
        (self.start + self.len - 1) % n
    }
}

/// Maximal runs of `Some(label)` entries.
pub(crate) fn label_runs(labels: &[Option<i8>], cyclic: bool) -> Vec<Run> {
    let n = labels.len();
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let origin = if cyclic {
        match (0..n).find(|&i| labels[i] != labels[(i + n - 1) % n]) {
            Some(i) => i,
            None => {
                if let Some(label) = labels[0] {
                    out.push(Run { start: 0, len: n, label });
                }
                return out;
            }
        }
    } else {
        0
    };
    let mut k = 0;
    while k < n {
        let i = (origin + k) % n;
        let label = labels[i];
        let mut len = 1;
        while k + len < n && labels[(origin + k + len) % n] == label {
            len += 1;
        }
        if let Some(label) = label {
            out.push(Run { start: i, len, label });
        }
        k += len;
    }
    out
}
