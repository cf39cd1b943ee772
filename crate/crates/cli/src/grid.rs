//! Parsing of sweep grids and number lists given on the command line.

/// `start:stop:step`, inclusive of `stop` when it lies on the grid within
/// `1e-12` steps. A single number gives a one-point grid.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| format!("'{s}' is not a number in grid '{spec}'"))
    };
    match parts.as_slice() {
        [one] => Ok(vec![num(one)?]),
        [start, stop, step] => {
            let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
            if !(step > 0.0) {
                return Err(format!("grid step must be positive in '{spec}'"));
            }
            if stop < start {
                return Err(format!("grid stop lies below start in '{spec}'"));
            }
            let span = (stop - start) / step;
            let nearest = span.round();
            let steps = if (span - nearest).abs() <= 1e-12 * nearest.max(1.0) {
                nearest
            } else {
                span.floor()
            };
            if steps > 1e7 {
                return Err(format!("grid '{spec}' has too many points"));
            }
            Ok((0..=steps as u64).map(|i| start + i as f64 * step).collect())
        }
        _ => Err(format!("grid '{spec}' must be start:stop:step or a single number")),
    }
}

pub fn parse_list<T: std::str::FromStr>(spec: &str, what: &str) -> Result<Vec<T>, String> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<T>()
                .map_err(|_| format!("'{s}' is not a valid {what}"))
        })
        .collect()
}
