//! Figure exports against the committed golden metadata. Set
//! `HOROTUBE_BLESS=1` to rewrite the golden files.

use std::path::PathBuf;

use horotube::export::{
    figure_metas, read_golden, write_figure, write_golden, Figure, FIGURE_GRID,
};

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
}

#[test]
fn figure_metadata_matches_golden() {
    let bless = std::env::var_os("HOROTUBE_BLESS").is_some();
    for figure in Figure::ALL {
        let metas = figure_metas(figure).unwrap();
        assert!(metas.iter().all(|m| m.points > 0), "{figure:?} is empty");
        if bless {
            write_golden(&golden_dir(), figure, &metas).unwrap();
            continue;
        }
        let golden = read_golden(&golden_dir(), figure).unwrap();
        assert_eq!(golden.len(), metas.len(), "{figure:?}");
        for (g, m) in golden.iter().zip(&metas) {
            assert!(g.matches(m), "{figure:?}: golden {g:?}, computed {m:?}");
        }
    }
}

#[test]
fn figure_files_are_written_and_nonempty() {
    let dir = std::env::temp_dir().join(format!("horotube-figures-{}", std::process::id()));
    for figure in Figure::ALL {
        for theta in figure.thetas() {
            let path = write_figure(figure, theta, FIGURE_GRID / 2, &dir).unwrap();
            let text = std::fs::read_to_string(&path).unwrap();
            assert!(text.lines().count() > 10, "{}", path.display());
        }
    }
    std::fs::remove_dir_all(&dir).unwrap();
}
