//! Generates a planted synthetic dataset, writes it to disk, reloads it and
//! prints its layout.
//!
//! `cargo run --release --example synth_dataset -- <out_dir>`

use voxdecode::dataset::{generate_synthetic, load_dataset, save_dataset, Label, SyntheticSpec};

fn main() -> voxdecode::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "synthetic-data".into());
    let spec = SyntheticSpec::with_blob(4, 6000, 40, 1.0, 7);
    let (bundle, planted) = generate_synthetic(&spec)?;
    let manifest = save_dataset(&bundle, &out)?;
    let reloaded = load_dataset(&manifest)?;
    assert_eq!(reloaded.scans().len(), bundle.scans().len());

    println!("manifest: {}", manifest.display());
    println!("grid {:?} voxels of {:?} mm, {} in mask", bundle.grid().dims, bundle.grid().voxel_size_mm, bundle.n_features());
    println!("planted features: {planted:?}");
    for p in reloaded.participants() {
        let blocks = reloaded.blocks_of(p);
        let pos = blocks.iter().filter(|(_, l)| *l == Label::Pos).count();
        println!(
            "participant {p}: {} scans, {} POS blocks, {} NEG blocks",
            reloaded.scans_of(p).len(),
            pos,
            blocks.len() - pos
        );
    }
    Ok(())
}
