use crate::learn::Design;
use crate::Scalar;

/// One-way ANOVA F statistic of each column between the two classes.
///
/// Zero within-class variance gives `+∞` when the class means differ and 0
/// when they coincide.
pub fn anova_f<T: Scalar>(data: &Design<T>) -> Vec<f64> {
    let n = data.n_rows();
    (0..data.n_features())
        .map(|j| {
            let col = data.x.column(j);
            let mut sum = [0.0f64; 2];
            let mut cnt = [0usize; 2];
            for (&v, &y) in col.iter().zip(&data.y) {
                sum[y as usize] += v.as_f64();
                cnt[y as usize] += 1;
            }
            if cnt[0] == 0 || cnt[1] == 0 {
                return 0.0;
            }
            let mean = [sum[0] / cnt[0] as f64, sum[1] / cnt[1] as f64];
            let grand = (sum[0] + sum[1]) / n as f64;
            let ssb: f64 = (0..2).map(|c| cnt[c] as f64 * (mean[c] - grand).powi(2)).sum();
            let ssw: f64 = col
                .iter()
                .zip(&data.y)
                .map(|(&v, &y)| (v.as_f64() - mean[y as usize]).powi(2))
                .sum();
            let scale = 1e-12 * (ssb + ssw).max(f64::MIN_POSITIVE);
            if ssw <= scale {
                return if ssb > scale { f64::INFINITY } else { 0.0 };
            }
            ssb / (ssw / (n - 2) as f64)
        })
        .collect()
}

/// Column indices of the `keep` highest F statistics; ties keep column order.
pub fn top_by_anova<T: Scalar>(data: &Design<T>, keep: usize) -> Vec<usize> {
    let f = anova_f(data);
    let mut idx: Vec<usize> = (0..f.len()).collect();
    idx.sort_by(|&a, &b| f[b].partial_cmp(&f[a]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b)));
    idx.truncate(keep);
    idx
}
