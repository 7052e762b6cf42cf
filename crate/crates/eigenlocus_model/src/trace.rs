use rayon::prelude::*;

use crate::model::{discriminant_value, Eigenlocus};
use crate::{Error, Result};

/// Node grid over a rectangle: nx by ny evaluation points, inclusive of the
/// boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn x(&self, i: usize) -> f64 {
        self.xmin + (self.xmax - self.xmin) * i as f64 / (self.nx - 1) as f64
    }

    pub fn y(&self, j: usize) -> f64 {
        self.ymin + (self.ymax - self.ymin) * j as f64 / (self.ny - 1) as f64
    }

    /// Bounding box of the points padded by `pad_stds` sample standard
    /// deviations per axis, at the given nodes-per-axis resolution.
    pub fn around_points(points: &[Vec<f64>], pad_stds: f64, resolution: usize) -> GridSpec {
        assert!(!points.is_empty(), "cannot bound an empty point set");
        let n = points.len() as f64;
        let mut spec = [(f64::INFINITY, f64::NEG_INFINITY, 0.0, 0.0); 2];
        for axis in 0..2 {
            let mean = points.iter().map(|p| p[axis]).sum::<f64>() / n;
            let var = points.iter().map(|p| (p[axis] - mean).powi(2)).sum::<f64>() / n;
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for p in points {
                lo = lo.min(p[axis]);
                hi = hi.max(p[axis]);
            }
            let pad = pad_stds * var.sqrt();
            spec[axis] = (lo - pad, hi + pad, mean, var);
        }
        GridSpec {
            xmin: spec[0].0,
            xmax: spec[0].1,
            ymin: spec[1].0,
            ymax: spec[1].1,
            nx: resolution,
            ny: resolution,
        }
    }
}

/// Line segments approximating one contour d(s) = level on the grid.
/// An empty segment list means the level is not attained anywhere on the
/// grid (check with [`LevelSetTrace::is_empty`]).
#[derive(Debug, Clone)]
pub struct LevelSetTrace {
    pub level: f64,
    pub segments: Vec<((f64, f64), (f64, f64))>,
    pub grid: GridSpec,
}

impl LevelSetTrace {
    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }
}

/// Marching squares with linear edge interpolation for the three levels
/// -1, 0, +1 of the discriminant. Grid node evaluation is data-parallel;
/// the cell sweep itself is a deterministic serial pass.
pub fn trace_level_sets(m: &Eigenlocus, grid: GridSpec) -> Result<Vec<LevelSetTrace>> {
    if m.dim() != 2 {
        return Err(Error::NotTwoDimensional(m.dim()));
    }
    if grid.nx < 16 || grid.ny < 16 {
        return Err(Error::ResolutionTooCoarse(grid.nx.min(grid.ny)));
    }
    let values: Vec<f64> = (0..grid.ny)
        .into_par_iter()
        .flat_map_iter(|j| (0..grid.nx).map(move |i| discriminant_value(m, &[grid.x(i), grid.y(j)])))
        .collect();
    let at = |i: usize, j: usize| values[j * grid.nx + i];

    let mut traces = Vec::with_capacity(3);
    for level in [-1.0, 0.0, 1.0] {
        let mut segments = Vec::new();
        for j in 0..grid.ny - 1 {
            for i in 0..grid.nx - 1 {
                let v00 = at(i, j);
                let v10 = at(i + 1, j);
                let v11 = at(i + 1, j + 1);
                let v01 = at(i, j + 1);
                let code = (usize::from(v00 >= level))
                    | (usize::from(v10 >= level) << 1)
                    | (usize::from(v11 >= level) << 2)
                    | (usize::from(v01 >= level) << 3);
                if code == 0 || code == 15 {
                    continue;
                }
                let (x0, x1) = (grid.x(i), grid.x(i + 1));
                let (y0, y1) = (grid.y(j), grid.y(j + 1));
                let lerp = |a: f64, b: f64, va: f64, vb: f64| -> f64 {
                    let t = ((level - va) / (vb - va)).clamp(0.0, 1.0);
                    a + t * (b - a)
                };
                let eb = (lerp(x0, x1, v00, v10), y0);
                let er = (x1, lerp(y0, y1, v10, v11));
                let et = (lerp(x0, x1, v01, v11), y1);
                let el = (x0, lerp(y0, y1, v00, v01));
                match code {
                    1 | 14 => segments.push((el, eb)),
                    2 | 13 => segments.push((eb, er)),
                    3 | 12 => segments.push((el, er)),
                    4 | 11 => segments.push((er, et)),
                    6 | 9 => segments.push((eb, et)),
                    7 | 8 => segments.push((el, et)),
                    5 => {
                        // saddle; disambiguate with the cell center value
                        if (v00 + v10 + v11 + v01) / 4.0 >= level {
                            segments.push((eb, er));
                            segments.push((et, el));
                        } else {
                            segments.push((el, eb));
                            segments.push((er, et));
                        }
                    }
                    10 => {
                        if (v00 + v10 + v11 + v01) / 4.0 >= level {
                            segments.push((el, eb));
                            segments.push((er, et));
                        } else {
                            segments.push((eb, er));
                            segments.push((et, el));
                        }
                    }
                    _ => unreachable!(),
                }
            }
        }
        traces.push(LevelSetTrace {
            level,
            segments,
            grid,
        });
    }
    Ok(traces)
}
