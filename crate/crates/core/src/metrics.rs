//! RAND index and feature-selection rates.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimators::ClusterAssignment;

/// Fraction of observation pairs on which two partitions agree.
pub fn rand_index(truth: &ClusterAssignment, est: &ClusterAssignment) -> Result<f64> {
    let n = truth.n();
    if est.n() != n {
        return Err(Error::Dimension(format!(
            "partitions of {n} and {} observations",
            est.n()
        )));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(
            "RAND index needs at least two observations".into(),
        ));
    }
    let (t, e) = (truth.labels(), est.labels());
    let mut agree = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            if (t[i] == t[j]) == (e[i] == e[j]) {
                agree += 1;
            }
        }
    }
    Ok(agree as f64 / (n * (n - 1) / 2) as f64)
}

/// True negative and true positive rates. A rate whose denominator is empty is `None`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SelectionRates {
    pub tnr: Option<f64>,
    pub tpr: Option<f64>,
}

/// `truth[j]` and `est[j]` flag feature `j` as nonzero.
pub fn tnr_tpr(truth: &[bool], est: &[bool]) -> Result<SelectionRates> {
    if truth.len() != est.len() {
        return Err(Error::Dimension(format!(
            "{} true flags and {} estimated flags",
            truth.len(),
            est.len()
        )));
    }
    let rate = |want: bool| {
        let denom = truth.iter().filter(|&&t| t == want).count();
        let hits = truth
            .iter()
            .zip(est)
            .filter(|(&t, &e)| t == want && e == want)
            .count();
        (denom > 0).then(|| hits as f64 / denom as f64)
    };
    Ok(SelectionRates {
        tnr: rate(false),
        tpr: rate(true),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(ids: &[usize]) -> ClusterAssignment {
        ClusterAssignment::from_labels(ids)
    }

    #[test]
    fn rand_examples() {
        assert_eq!(
            rand_index(&part(&[1, 1, 2, 2]), &part(&[1, 1, 2, 2])).unwrap(),
            1.0
        );
        assert_eq!(
            rand_index(&part(&[1, 1, 2, 2]), &part(&[1, 2, 2, 2])).unwrap(),
            0.5
        );
        assert_eq!(rand_index(&part(&[1, 1]), &part(&[1, 2])).unwrap(), 0.0);
        assert!(rand_index(&part(&[1, 1]), &part(&[1, 2, 3])).is_err());
    }

    #[test]
    fn rate_examples() {
        let flags = [true, false, false, true];
        let r = tnr_tpr(&flags, &flags).unwrap();
        assert_eq!((r.tnr, r.tpr), (Some(1.0), Some(1.0)));

        let mut truth = vec![false; 20];
        truth[0] = true;
        truth[1] = true;
        let mut est = truth.clone();
        est.iter_mut().skip(2).take(9).for_each(|f| *f = true);
        let r = tnr_tpr(&truth, &est).unwrap();
        assert_eq!((r.tnr, r.tpr), (Some(0.5), Some(1.0)));

        let r = tnr_tpr(&[true, true], &[true, false]).unwrap();
        assert_eq!((r.tnr, r.tpr), (None, Some(0.5)));
    }
}
