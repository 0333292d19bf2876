//! Corpus manifest CSV: `id,image_path,mask_path,dx`.

use super::{resolve_relative, ImageRecord};
use crate::error::{Error, Result};
use std::collections::HashSet;
use std::path::Path;

/// Load a manifest CSV. Relative paths resolve against the manifest's directory.
pub fn load_manifest(path: &Path) -> Result<Vec<ImageRecord>> {
    let base_dir = path.parent().unwrap_or(Path::new(".")).to_path_buf();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => Error::io(
                path,
                std::io::Error::new(std::io::ErrorKind::NotFound, e.to_string()),
            ),
            _ => Error::Manifest(e.to_string()),
        })?;

    let headers = reader
        .headers()
        .map_err(|e| Error::Manifest(e.to_string()))?
        .clone();
    let expected = ["id", "image_path", "mask_path", "dx"];
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(Error::Manifest(format!(
            "expected header {:?}, found {:?}",
            expected.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }

    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for (i, row) in reader.records().enumerate() {
        let line = i + 2; // header is line 1
        let row = row.map_err(|e| Error::Manifest(format!("line {line}: {e}")))?;
        if row.len() != 4 {
            return Err(Error::Manifest(format!(
                "line {line}: expected 4 fields, found {}",
                row.len()
            )));
        }
        let id = row[0].trim().to_string();
        if id.is_empty() {
            return Err(Error::Manifest(format!("line {line}: empty id")));
        }
        if !seen.insert(id.clone()) {
            return Err(Error::validation(format!("duplicate id \"{id}\"")));
        }
        let image_path = row[1].trim();
        if image_path.is_empty() {
            return Err(Error::Manifest(format!("line {line}: empty image_path")));
        }
        let mask = row[2].trim();
        let dx = row[3].trim().to_string();
        if dx.is_empty() {
            return Err(Error::Manifest(format!("line {line}: empty dx")));
        }
        records.push(ImageRecord {
            id,
            image_path: resolve_relative(&base_dir, image_path),
            mask_path: if mask.is_empty() {
                None
            } else {
                Some(resolve_relative(&base_dir, mask))
            },
            dx,
        });
    }
    Ok(records)
}

/// Write records back out in manifest format, paths as given.
pub fn write_manifest(records: &[ImageRecord], path: &Path) -> Result<()> {
    let mut out = String::from("id,image_path,mask_path,dx\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.id,
            r.image_path.display(),
            r.mask_path
                .as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_default(),
            r.dx
        ));
    }
    std::fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Build a manifest from the HAM10000 metadata file.
///
/// `metadata` is the distribution's `HAM10000_metadata.csv` (columns include
/// `image_id` and `dx`); images are looked up as `<image_id>.jpg` across
/// `image_dirs`, masks as `<image_id>_segmentation.png` under `mask_dir`.
pub fn ham10000_manifest(
    metadata: &Path,
    image_dirs: &[&Path],
    mask_dir: Option<&Path>,
) -> Result<Vec<ImageRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(metadata)
        .map_err(|e| Error::Manifest(e.to_string()))?;
    let headers = reader
        .headers()
        .map_err(|e| Error::Manifest(e.to_string()))?
        .clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Manifest(format!("metadata lacks column {name}")))
    };
    let id_col = col("image_id")?;
    let dx_col = col("dx")?;

    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for (i, row) in reader.records().enumerate() {
        let row = row.map_err(|e| Error::Manifest(format!("line {}: {e}", i + 2)))?;
        let id = row[id_col].to_string();
        if !seen.insert(id.clone()) {
            return Err(Error::validation(format!("duplicate id \"{id}\"")));
        }
        let file = format!("{id}.jpg");
        let image_path = image_dirs
            .iter()
            .map(|d| d.join(&file))
            .find(|p| p.exists())
            .ok_or_else(|| Error::Manifest(format!("image {file} not found in any image dir")))?;
        let mask_path = mask_dir.map(|d| d.join(format!("{id}_segmentation.png")));
        if let Some(p) = &mask_path {
            if !p.exists() {
                return Err(Error::Manifest(format!("mask {} not found", p.display())));
            }
        }
        records.push(ImageRecord {
            id,
            image_path,
            mask_path,
            dx: row[dx_col].to_string(),
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_file(dir: &Path, name: &str, contents: &str) -> std::path::PathBuf {
        let p = dir.join(name);
        let mut f = std::fs::File::create(&p).unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        p
    }

    #[test]
    fn loads_rows_in_order() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_file(
            dir.path(),
            "m.csv",
            "id,image_path,mask_path,dx\na,img/a.png,,nv\nb,img/b.png,masks/b.png,mel\nc,img/c.png,,bkl\n",
        );
        let recs = load_manifest(&p).unwrap();
        assert_eq!(recs.len(), 3);
        assert_eq!(recs[0].id, "a");
        assert_eq!(recs[1].mask_path, Some(dir.path().join("masks/b.png")));
        assert_eq!(recs[2].dx, "bkl");
        assert!(!recs[0].is_anomalous());
        assert!(recs[1].is_anomalous());
    }

    #[test]
    fn duplicate_id_is_rejected_naming_the_id() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_file(
            dir.path(),
            "m.csv",
            "id,image_path,mask_path,dx\nISIC_0001,a.png,,nv\nISIC_0001,b.png,,nv\n",
        );
        let err = load_manifest(&p).unwrap_err();
        assert!(err.to_string().contains("ISIC_0001"), "{err}");
    }

    #[test]
    fn bad_row_reports_line_number() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_file(
            dir.path(),
            "m.csv",
            "id,image_path,mask_path,dx\na,a.png,,nv\nb,b.png,\n",
        );
        let err = load_manifest(&p).unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = load_manifest(Path::new("/nonexistent/m.csv")).unwrap_err();
        assert_eq!(err.code(), "io");
    }

    #[test]
    fn roundtrip_is_byte_stable_modulo_paths() {
        let dir = tempfile::tempdir().unwrap();
        let text = "id,image_path,mask_path,dx\na,/abs/a.png,,nv\nb,/abs/b.png,/abs/b_m.png,mel\n";
        let p = write_file(dir.path(), "m.csv", text);
        let recs = load_manifest(&p).unwrap();
        let out = dir.path().join("out.csv");
        write_manifest(&recs, &out).unwrap();
        assert_eq!(std::fs::read_to_string(&out).unwrap(), text);
    }
}
