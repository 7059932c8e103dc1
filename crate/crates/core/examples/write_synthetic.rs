//! Writes a synthetic indicator table as CSV: `write_synthetic OUT.csv [benign malware features seed]`.

use std::path::PathBuf;

use fedsim_core::synthetic::indicator_table;
use fedsim_core::write_csv;

fn main() -> fedsim_core::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let out = PathBuf::from(args.first().map(String::as_str).unwrap_or("synthetic.csv"));
    let num = |i: usize, d: u64| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(d);
    let ds = indicator_table::<f64>(
        num(1, 600) as usize,
        num(2, 300) as usize,
        num(3, 40) as usize,
        10,
        num(4, 7),
    )?;
    write_csv(&ds, &out, "class")?;
    println!("{} rows → {}", ds.len(), out.display());
    Ok(())
}
