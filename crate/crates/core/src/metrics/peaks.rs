/// A local extremum of a sampled profile. Plateaus report their middle
/// sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Extremum {
    pub index: usize,
    pub value: f64,
    pub prominence: f64,
}

/// Interior local maxima whose prominence is at least `min_prominence`.
pub fn find_peaks(values: &[f64], min_prominence: f64) -> Vec<Extremum> {
    let n = values.len();
    let mut out = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if values[i] > values[i - 1] {
            // walk the plateau
            let mut j = i;
            while j + 1 < n && values[j + 1] == values[i] {
                j += 1;
            }
            if j + 1 < n && values[j + 1] < values[i] {
                let prominence = prominence(values, i, j);
                if prominence >= min_prominence {
                    out.push(Extremum {
                        index: (i + j) / 2,
                        value: values[i],
                        prominence,
                    });
                }
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

/// Interior local minima with depth at least `min_prominence`.
pub fn find_troughs(values: &[f64], min_prominence: f64) -> Vec<Extremum> {
    let negated: Vec<f64> = values.iter().map(|v| -v).collect();
    find_peaks(&negated, min_prominence)
        .into_iter()
        .map(|e| Extremum {
            value: -e.value,
            ..e
        })
        .collect()
}

/// Height of the plateau `[a, b]` above the higher of the two lowest points
/// reached before climbing to something taller (or the profile end).
fn prominence(values: &[f64], a: usize, b: usize) -> f64 {
    let h = values[a];
    let left = values[..a]
        .iter()
        .rev()
        .take_while(|&&v| v <= h)
        .copied()
        .fold(f64::INFINITY, f64::min);
    let right = values[b + 1..]
        .iter()
        .take_while(|&&v| v <= h)
        .copied()
        .fold(f64::INFINITY, f64::min);
    h - left.max(right)
}
