use std::io::{BufRead, Write};

use num_complex::Complex64;

use crate::field::{ComplexField2D, IntensityMap};
use crate::grid::Grid2D;
use crate::BeamError;

/// 16-bit binary PGM (P5, maxval 65535, big-endian samples), linear in
/// intensity and normalized to the image maximum.
pub fn write_pgm16<W: Write>(mut w: W, image: &IntensityMap) -> std::io::Result<()> {
    let g = &image.grid;
    write!(w, "P5\n{} {}\n65535\n", g.nx, g.ny)?;
    let max = image.max();
    let scale = if max > 0.0 { 65535.0 / max } else { 0.0 };
    let mut buf = Vec::with_capacity(g.len() * 2);
    for v in &image.values {
        let level = (v * scale).round().clamp(0.0, 65535.0) as u16;
        buf.extend_from_slice(&level.to_be_bytes());
    }
    w.write_all(&buf)
}

/// Raw complex-field dump: one text header line
/// `nx ny dx_mm dy_mm wavelength_nm`, then row-major little-endian f64
/// (re, im) pairs.
pub fn write_raw_field<W: Write>(mut w: W, field: &ComplexField2D) -> std::io::Result<()> {
    let g = &field.grid;
    writeln!(
        w,
        "{} {} {} {} {}",
        g.nx,
        g.ny,
        g.dx,
        g.dy,
        field.wavelength * 1e6
    )?;
    let mut buf = Vec::with_capacity(g.len() * 16);
    for v in &field.values {
        buf.extend_from_slice(&v.re.to_le_bytes());
        buf.extend_from_slice(&v.im.to_le_bytes());
    }
    w.write_all(&buf)
}

/// Read a field written by [`write_raw_field`].
pub fn read_raw_field<R: BufRead>(mut r: R) -> Result<ComplexField2D, BeamError> {
    let mut header = String::new();
    r.read_line(&mut header)?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 5 {
        return Err(BeamError::InvalidInput(format!(
            "raw field header needs 5 fields, got {}",
            parts.len()
        )));
    }
    let parse_err = |what: &str| BeamError::InvalidInput(format!("bad {what} in raw field header"));
    let nx: usize = parts[0].parse().map_err(|_| parse_err("nx"))?;
    let ny: usize = parts[1].parse().map_err(|_| parse_err("ny"))?;
    let dx: f64 = parts[2].parse().map_err(|_| parse_err("dx"))?;
    let dy: f64 = parts[3].parse().map_err(|_| parse_err("dy"))?;
    let wl_nm: f64 = parts[4].parse().map_err(|_| parse_err("wavelength"))?;

    let grid = Grid2D::new(nx, ny, dx, dy)?;
    let mut bytes = vec![0u8; grid.len() * 16];
    r.read_exact(&mut bytes)?;
    let values = bytes
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[0..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..16].try_into().unwrap()),
            )
        })
        .collect();
    Ok(ComplexField2D {
        grid,
        values,
        wavelength: wl_nm * 1e-6,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::{lg_field, LgIndex};

    #[test]
    fn raw_field_round_trip_is_bit_exact() {
        let g = Grid2D::square(64, 4.0).unwrap();
        let f = lg_field(&g, LgIndex::new(-2, 1), 0.5, 1.3).unwrap();
        let mut buf = Vec::new();
        write_raw_field(&mut buf, &f).unwrap();
        let back = read_raw_field(std::io::Cursor::new(&buf)).unwrap();
        assert_eq!(back.grid, f.grid);
        assert_eq!(back.values, f.values);
        assert_eq!(back.wavelength, f.wavelength);
    }

    #[test]
    fn pgm_header_and_scaling() {
        let g = Grid2D::square(64, 4.0).unwrap();
        let f = lg_field(&g, LgIndex::new(0, 0), 0.5, 1.0).unwrap();
        let mut buf = Vec::new();
        write_pgm16(&mut buf, &f.intensity()).unwrap();
        let header = b"P5\n64 64\n65535\n";
        assert_eq!(&buf[..header.len()], header);
        assert_eq!(buf.len(), header.len() + 64 * 64 * 2);
        // peak pixel maps to full scale (big-endian)
        let body = &buf[header.len()..];
        let max = body
            .chunks_exact(2)
            .map(|c| u16::from_be_bytes([c[0], c[1]]))
            .max()
            .unwrap();
        assert_eq!(max, 65535);
    }

    #[test]
    fn pgm_of_dark_image_is_all_zero() {
        let g = Grid2D::square(64, 4.0).unwrap();
        let image = IntensityMap {
            grid: g,
            values: vec![0.0; g.len()],
        };
        let mut buf = Vec::new();
        write_pgm16(&mut buf, &image).unwrap();
        assert!(buf[b"P5\n64 64\n65535\n".len()..].iter().all(|b| *b == 0));
    }
}
