//! Plain-text PGM (P2) and PPM (P3) writers.

use std::fmt::Write;

pub const RED: [u8; 3] = [255, 0, 0];

/// Grayscale image, `pixels` in row-major order.
pub fn pgm(rows: usize, cols: usize, pixels: &[u8]) -> String {
    assert_eq!(pixels.len(), rows * cols);
    let mut s = format!("P2\n{cols} {rows}\n255\n");
    for r in 0..rows {
        let line: Vec<String> = pixels[r * cols..(r + 1) * cols]
            .iter()
            .map(|v| v.to_string())
            .collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

/// The grayscale image as RGB with every pixel in `highlight` painted red.
pub fn ppm_overlay(
    rows: usize,
    cols: usize,
    pixels: &[u8],
    highlight: &[(usize, usize)],
) -> String {
    assert_eq!(pixels.len(), rows * cols);
    let mut rgb: Vec<[u8; 3]> = pixels.iter().map(|&v| [v, v, v]).collect();
    for &(r, c) in highlight {
        rgb[r * cols + c] = RED;
    }
    let mut s = format!("P3\n{cols} {rows}\n255\n");
    for r in 0..rows {
        for (c, px) in rgb[r * cols..(r + 1) * cols].iter().enumerate() {
            if c > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{} {} {}", px[0], px[1], px[2]);
        }
        s.push('\n');
    }
    s
}

/// Parses a P3 body back into RGB triples. Used by tests and tooling.
pub fn parse_ppm(text: &str) -> Option<(usize, usize, Vec<[u8; 3]>)> {
    let mut it = text.split_ascii_whitespace();
    if it.next()? != "P3" {
        return None;
    }
    let cols: usize = it.next()?.parse().ok()?;
    let rows: usize = it.next()?.parse().ok()?;
    let _max: u32 = it.next()?.parse().ok()?;
    let vals: Vec<u8> = it.map(|t| t.parse().ok()).collect::<Option<_>>()?;
    if vals.len() != rows * cols * 3 {
        return None;
    }
    Some((
        rows,
        cols,
        vals.chunks(3).map(|c| [c[0], c[1], c[2]]).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgm_layout() {
        assert_eq!(
            pgm(2, 3, &[0, 1, 2, 3, 4, 255]),
            "P2\n3 2\n255\n0 1 2\n3 4 255\n"
        );
    }

    #[test]
    fn overlay_paints_only_highlighted() {
        let px = [10, 20, 30, 40];
        let s = ppm_overlay(2, 2, &px, &[(1, 0)]);
        let (r, c, rgb) = parse_ppm(&s).unwrap();
        assert_eq!((r, c), (2, 2));
        assert_eq!(rgb, vec![[10, 10, 10], [20, 20, 20], RED, [40, 40, 40]]);
    }
}
