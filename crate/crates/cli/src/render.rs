use std::fmt::Write;

use spencer::cohomology::CohomologyTable;

/// Grid of a cohomology table, rows `i`, columns `j`.
pub fn table(title: &str, t: &CohomologyTable) -> String {
    let mut s = format!("{title} (i <= {})\n", t.i_max);
    let w = (0..=t.i_max).flat_map(|i| (0..=t.j_max).map(move |j| (i, j))).map(|(i, j)| t.get(i, j).to_string().len()).max().unwrap_or(1).max(2);
    let _ = write!(s, "  i\\j");
    for j in 0..=t.j_max {
        let _ = write!(s, " {j:>w$}");
    }
    s.push('\n');
    for i in 0..=t.i_max {
        let _ = write!(s, "  {i:>3}");
        for j in 0..=t.j_max {
            let d = t.get(i, j);
            if d == 0 {
                let _ = write!(s, " {:>w$}", ".");
            } else {
                let _ = write!(s, " {d:>w$}");
            }
        }
        s.push('\n');
    }
    s
}

pub fn list<T: ToString>(v: &[T]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

pub fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
