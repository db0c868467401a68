use super::ScalarMap;
use crate::{Error, Result};

/// Per-axis Gaussian sigma in voxels for a kernel of `fwhm_mm`.
pub fn fwhm_to_sigma_voxels(fwhm_mm: f64, voxel_size_mm: [f64; 3]) -> [f64; 3] {
    let factor = 2.0 * (2.0 * std::f64::consts::LN_2).sqrt();
    voxel_size_mm.map(|s| fwhm_mm / s / factor)
}

/// Sampled Gaussian on `-r..=r` with `r = ceil(4 sigma)`, scaled to unit sum.
pub fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    let r = (4.0 * sigma).ceil() as i64;
    let mut k: Vec<f64> = (-r..=r)
        .map(|i| (-(i * i) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let total: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= total);
    k
}

/// Separable Gaussian convolution with zero padding outside the grid.
pub fn smooth_map(map: &ScalarMap, fwhm_mm: f64) -> Result<ScalarMap> {
    if !(fwhm_mm > 0.0 && fwhm_mm.is_finite()) {
        return Err(Error::InvalidConfig(format!("fwhm must be > 0, got {fwhm_mm}")));
    }
    if map.values.len() != map.grid.n_voxels() {
        return Err(Error::DimensionMismatch {
            expected: map.grid.n_voxels(),
            found: map.values.len(),
        });
    }
    let sigma = fwhm_to_sigma_voxels(fwhm_mm, map.grid.voxel_size_mm);
    let dims = map.grid.dims;
    let strides = [1, dims[0], dims[0] * dims[1]];
    let mut values = map.values.clone();
    let mut line = Vec::new();
    for axis in 0..3 {
        let kernel = gaussian_kernel(sigma[axis]);
        let r = (kernel.len() / 2) as i64;
        let n = dims[axis];
        let stride = strides[axis];
        for start in 0..values.len() {
            // one pass per line, entered from its first voxel
            if !(start / stride).is_multiple_of(n) {
                continue;
            }
            line.clear();
            line.extend((0..n).map(|i| values[start + i * stride]));
            for i in 0..n {
                let mut acc = 0.0;
                for (k, w) in kernel.iter().enumerate() {
                    let j = i as i64 + k as i64 - r;
                    if j >= 0 && (j as usize) < n {
                        acc += w * line[j as usize];
                    }
                }
                values[start + i * stride] = acc;
            }
        }
    }
    Ok(ScalarMap {
        grid: map.grid.clone(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::VolumeGrid;

    #[test]
    fn kernel_is_normalised_and_symmetric() {
        for sigma in [0.1, 0.637, 0.8493, 2.5] {
            let k = gaussian_kernel(sigma);
            assert!((k.iter().sum::<f64>() - 1.0).abs() < 1e-15);
            assert_eq!(k.len() % 2, 1);
            assert!(k.iter().zip(k.iter().rev()).all(|(a, b)| a == b));
        }
    }

    #[test]
    fn boundary_impulse_loses_mass() {
        let grid = VolumeGrid::new([5, 5, 5], [3.0, 3.0, 4.0], [0.0; 3]).unwrap();
        let mut map = ScalarMap::zeros(grid);
        map.values[0] = 1.0;
        let out = smooth_map(&map, 6.0).unwrap();
        let total: f64 = out.values.iter().sum();
        assert!(total < 1.0 && total > 0.0);
    }

    #[test]
    fn rejects_non_positive_fwhm() {
        let grid = VolumeGrid::new([2, 2, 2], [3.0, 3.0, 4.0], [0.0; 3]).unwrap();
        let map = ScalarMap::zeros(grid);
        assert!(smooth_map(&map, 0.0).is_err());
        assert!(smooth_map(&map, -1.0).is_err());
    }
}
