//! Content-addressed artifact cache.
//!
//! An entry is a directory named by the run's config hash holding the exact
//! bytes that were delivered to the user's output paths, manifest included.
//! A rerun of an unchanged request is served those stored bytes, so repeat
//! runs are byte-identical even though a fresh computation would re-stamp
//! the manifest timestamp. Commands with unpinned randomness bypass the
//! cache entirely.
//!
//! Concurrent invocations are coordinated with an advisory `flock` on
//! `<dir>/.lock` (shared for reads, exclusive for writes); entries are
//! staged in a temp directory and published with a single rename.

use std::fs;
use std::fs::File;
use std::io;
use std::path::{Path, PathBuf};

const LOCK_FILE: &str = ".lock";

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    /// Directory precedence: explicit flag or config value, then the
    /// `SYMGAUSS_CACHE_DIR` environment variable, then `./.symgauss-cache`.
    pub fn resolve_dir(explicit: Option<PathBuf>) -> PathBuf {
        explicit
            .or_else(|| std::env::var_os("SYMGAUSS_CACHE_DIR").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(".symgauss-cache"))
    }

    pub fn open(dir: PathBuf) -> io::Result<Cache> {
        fs::create_dir_all(&dir)?;
        Ok(Cache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn entry_dir(&self, hash: &str) -> PathBuf {
        self.dir.join(hash)
    }

    pub fn contains(&self, hash: &str) -> bool {
        self.entry_dir(hash).is_dir()
    }

    /// All files of an entry as `(name, bytes)`, sorted by name, or `None`
    /// when the entry does not exist.
    pub fn lookup(&self, hash: &str) -> io::Result<Option<Vec<(String, Vec<u8>)>>> {
        let _lock = LockGuard::acquire(&self.dir.join(LOCK_FILE), false)?;
        let entry = self.entry_dir(hash);
        if !entry.is_dir() {
            return Ok(None);
        }
        let mut files = Vec::new();
        for item in fs::read_dir(&entry)? {
            let item = item?;
            let name = item.file_name().to_string_lossy().into_owned();
            files.push((name, fs::read(item.path())?));
        }
        files.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(Some(files))
    }

    /// Stores an entry unless one already exists; the first write wins so
    /// that existing consumers keep seeing identical bytes.
    pub fn store(&self, hash: &str, files: &[(&str, &[u8])]) -> io::Result<()> {
        let _lock = LockGuard::acquire(&self.dir.join(LOCK_FILE), true)?;
        let entry = self.entry_dir(hash);
        if entry.is_dir() {
            return Ok(());
        }
        let staging = self
            .dir
            .join(format!(".staging-{hash}-{}", std::process::id()));
        if staging.exists() {
            fs::remove_dir_all(&staging)?;
        }
        fs::create_dir(&staging)?;
        for (name, bytes) in files {
            fs::write(staging.join(name), bytes)?;
        }
        match fs::rename(&staging, &entry) {
            Ok(()) => Ok(()),
            Err(e) => {
                let _ = fs::remove_dir_all(&staging);
                Err(e)
            }
        }
    }
}

/// Advisory file lock, released on drop. On non-Unix targets this degrades
/// to plain file creation; the cache then relies on the atomic rename alone.
struct LockGuard {
    _file: File,
}

impl LockGuard {
    fn acquire(path: &Path, exclusive: bool) -> io::Result<LockGuard> {
        let file = File::options()
            .create(true)
            .truncate(false)
            .write(true)
            .open(path)?;
        #[cfg(unix)]
        {
            use std::os::unix::io::AsRawFd;
            let op = if exclusive {
                libc::LOCK_EX
            } else {
                libc::LOCK_SH
            };
            // SAFETY: flock on an fd we own; blocks until granted.
            let rc = unsafe { libc::flock(file.as_raw_fd(), op) };
            if rc != 0 {
                return Err(io::Error::last_os_error());
            }
        }
        #[cfg(not(unix))]
        let _ = exclusive;
        Ok(LockGuard { _file: file })
    }
}

#[cfg(unix)]
impl Drop for LockGuard {
    fn drop(&mut self) {
        use std::os::unix::io::AsRawFd;
        // SAFETY: releasing a lock we hold; close would release it anyway.
        unsafe {
            libc::flock(self._file.as_raw_fd(), libc::LOCK_UN);
        }
    }
}
