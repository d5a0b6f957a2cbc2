//! Gnuplot scripts that sit next to the CSV outputs.

use std::path::Path;

use whichway_core::Error;

fn write(path: &Path, body: String) -> Result<(), Error> {
    std::fs::write(path, body)?;
    Ok(())
}

pub fn fringes(dir: &Path) -> Result<(), Error> {
    write(
        &dir.join("fringes.gp"),
        "set datafile separator ','\n\
         set xlabel 'x (mm)'\n\
         set ylabel 'intensity'\n\
         plot 'fringes.csv' every ::1 using ($1*1e3):2 with lines title 'direct image'\n"
            .to_string(),
    )
}

pub fn scans(dir: &Path, labels: &[String]) -> Result<(), Error> {
    let mut body = String::from(
        "set datafile separator ','\n\
         set xlabel 's (mm)'\n\
         set ylabel 'electrons'\n\
         plot ",
    );
    let curves: Vec<String> = labels
        .iter()
        .flat_map(|l| {
            [
                format!("'scan_a{l}mm.csv' every ::1 using 2:3 with lines title 'F {l} mm'"),
                format!("'scan_a{l}mm.csv' every ::1 using 2:4 with lines title 'left {l} mm'"),
                format!("'scan_a{l}mm.csv' every ::1 using 2:5 with lines title 'right {l} mm'"),
            ]
        })
        .collect();
    body.push_str(&curves.join(", \\\n     "));
    body.push('\n');
    write(&dir.join("scans.gp"), body)
}

pub fn reconstructions(dir: &Path) -> Result<(), Error> {
    write(
        &dir.join("recon.gp"),
        "set datafile separator ','\n\
         set xlabel 'pupil position (mm)'\n\
         set ylabel 'P_hat'\n\
         plot 'recon_total.csv' every ::1 using 1:2 with lines title 'total', \\\n\
         \x20    'recon_left.csv' every ::1 using 1:2 with lines title 'left', \\\n\
         \x20    'recon_right.csv' every ::1 using 1:2 with lines title 'right'\n"
            .to_string(),
    )
}
