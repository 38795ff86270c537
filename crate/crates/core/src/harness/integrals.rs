use std::path::Path;

use crate::error::{Error, Result};
use crate::molint::{read_fcidump, write_fcidump, Fcidump, MolecularSystem};

use super::config::RunConfig;

/// Writes the MO-basis FCIDUMP of the configured geometry and checks that
/// reading it back reproduces the same integrals.
pub fn cmd_integrals(config: &RunConfig, path: &Path) -> Result<Fcidump> {
    let system = MolecularSystem::from_geometry(config.geometry.build(None)?, &config.basis)?;
    let dump = system.mo_fcidump();
    if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    write_fcidump(path, &dump)?;
    let back = read_fcidump(path)?;
    if back.render() != dump.render() {
        return Err(Error::Config(format!("{} does not round-trip", path.display())));
    }
    Ok(back)
}
