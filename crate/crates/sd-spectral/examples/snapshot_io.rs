//! The snapshot file format: a one-line JSON header followed by raw
//! little-endian f64 samples (complex fields interleave re, im). Round
//! trips are bit-exact; a big-endian byte order declared in the header is
//! converted on read.

use sd_spectral::field::ComplexField;
use sd_spectral::snapshot::{read_snapshot, write_snapshot, Snapshot};
use sd_spectral::Grid;

fn main() -> sd_spectral::Result<()> {
    let dir = std::path::Path::new("out/examples/snapshots");
    std::fs::create_dir_all(dir)?;
    let grid = Grid::new(2, 32, 8.0)?;
    let field = ComplexField::gaussian(&grid, 1.0, 1.0, &grid.center()[..2]);

    let path = dir.join("demo.snap");
    write_snapshot(&Snapshot::Complex { field: field.clone(), time: 1.25 }, &path)?;

    let bytes = std::fs::read(&path)?;
    let header_end = bytes.iter().position(|&b| b == b'\n').unwrap();
    println!("header : {}", String::from_utf8_lossy(&bytes[..header_end]));
    println!("payload: {} bytes ({} complex samples)", bytes.len() - header_end - 1, grid.len());

    match read_snapshot(&path)? {
        Snapshot::Complex { field: back, time } => {
            let exact = back
                .values
                .iter()
                .zip(&field.values)
                .all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits());
            println!("read back at t = {time}; bitwise exact: {exact}");
        }
        Snapshot::Real { .. } => unreachable!("wrote a complex snapshot"),
    }
    Ok(())
}
