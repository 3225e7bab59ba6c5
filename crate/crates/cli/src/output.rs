use std::io::Write;
use std::path::Path;

use crate::report::Table;

/// Write through a temporary file in the target directory and rename it
/// into place, so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn csv_bytes(table: &Table) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["index", "value"]).expect("in-memory write");
    for (i, v) in table.values.iter().enumerate() {
        w.write_record([i.to_string(), v.to_string()]).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// `<dir>/<table name>.csv` for each table.
pub fn write_tables(dir: &Path, tables: &[Table]) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for t in tables {
        write_atomic(&dir.join(format!("{}.csv", t.name)), &csv_bytes(t))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let t = Table {
            name: "s".into(),
            values: vec![0.5, 1e-20],
        };
        assert_eq!(String::from_utf8(csv_bytes(&t)).unwrap(), "index,value\n0,0.5\n1,0.00000000000000000001\n");
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.json");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read(&p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
