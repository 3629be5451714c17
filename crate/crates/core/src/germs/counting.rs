/// `floor(r^2 / 4)`: `c1(r) = vol(t^m O)^-floor(r^2/4)`.
pub fn count_c1_exponent(r: u32) -> u32 {
    r * r / 4
}

/// `floor((r^2 + 2r - 3) / 4)`, the number of free variables in the unit
/// orbital integral.
pub fn count_c2(r: u32) -> u32 {
    (r * r + 2 * r).saturating_sub(3) / 4
}

/// Direct count: entries `(i, j)` with `i < j`, `i + j >= r + 1`, plus
/// diagonal entries with `2i >= r + 1`, minus the dependent entry `x_{r,r}`.
pub fn count_c2_direct(r: u32) -> u32 {
    let mut n = 0;
    for i in 1..=r {
        for j in i..=r {
            let keep = if i < j { i + j > r } else { 2 * i > r };
            n += keep as u32;
        }
    }
    n - 1
}

/// Both bracket identities:
/// `c2 - floor((r+1)/2) - floor(r^2/4) = -1` and
/// `r(r-1)/2 + 1 + (r-2) - c2 = floor(r^2/4)`.
pub fn bracket_identities(r: u32) -> bool {
    let (r, c1, c2) = (r as i64, count_c1_exponent(r) as i64, count_c2(r) as i64);
    let first = c2 - (r + 1) / 2 - c1 == -1;
    let second = r * (r - 1) / 2 + 1 + (r - 2) - c2 == c1;
    first && second
}
