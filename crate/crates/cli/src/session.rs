//! In-memory reconciliation sessions with optional JSON snapshots on disk.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use afmerge_core::{load_csv, parse_recipe, save_csv, Dataset, MergedRecipe, Recipe};
use parking_lot::RwLock;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::Settings;
use crate::engine::Analysis;
use crate::error::ServiceError;

/// Upload body for `POST /sessions`, also the on-disk snapshot format.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SessionUpload {
    /// Recipe JSON documents.
    pub recipes: Vec<Value>,
    /// CSV text of the dataset to clean.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selected: Option<usize>,
}

#[derive(Debug)]
pub struct Session {
    pub id: String,
    pub dataset: Option<Dataset>,
    pub analysis: Analysis,
    pub selected: Option<usize>,
    pub merged: Option<MergedRecipe>,
}

impl Session {
    pub fn create(id: String, upload: &SessionUpload, settings: &Settings) -> Result<Self, ServiceError> {
        let recipes = upload
            .recipes
            .iter()
            .enumerate()
            .map(|(i, v)| {
                parse_recipe(&v.to_string()).map_err(|e| ServiceError::Invalid(format!("recipe {}: {e}", i + 1)))
            })
            .collect::<Result<Vec<Recipe>, _>>()?;
        let dataset = upload.csv.as_deref().map(load_csv).transpose()?;
        let analysis = Analysis::new(recipes, settings)?;
        let mut session = Session {
            id,
            dataset,
            analysis,
            selected: None,
            merged: None,
        };
        if let Some(i) = upload.selected {
            session.select(i)?;
        }
        Ok(session)
    }

    /// Merges the stable labeling at `index` and records the selection.
    pub fn select(&mut self, index: usize) -> Result<&MergedRecipe, ServiceError> {
        let merged = self.analysis.merge(Some(index))?;
        self.selected = Some(index);
        Ok(self.merged.insert(merged))
    }

    pub fn snapshot(&self) -> SessionUpload {
        SessionUpload {
            recipes: self
                .analysis
                .recipes
                .iter()
                .map(|r| serde_json::from_str(&r.to_json()).expect("recipe JSON"))
                .collect(),
            csv: self.dataset.as_ref().map(save_csv),
            selected: self.selected,
        }
    }
}

pub type SessionHandle = Arc<RwLock<Session>>;

/// Session registry. Each session sits behind its own lock: mutations take
/// it exclusively, reads share it.
pub struct SessionStore {
    sessions: RwLock<HashMap<String, SessionHandle>>,
    settings: Settings,
    snapshot_dir: Option<PathBuf>,
}

impl SessionStore {
    pub fn new(settings: Settings, snapshot_dir: Option<PathBuf>) -> Self {
        SessionStore {
            sessions: RwLock::new(HashMap::new()),
            settings,
            snapshot_dir,
        }
    }

    pub fn settings(&self) -> &Settings {
        &self.settings
    }

    pub fn create(&self, upload: &SessionUpload) -> Result<SessionHandle, ServiceError> {
        let id = uuid::Uuid::new_v4().simple().to_string();
        let session = Session::create(id.clone(), upload, &self.settings)?;
        let handle = Arc::new(RwLock::new(session));
        self.persist(&handle.read())?;
        self.sessions.write().insert(id, handle.clone());
        Ok(handle)
    }

    pub fn get(&self, id: &str) -> Result<SessionHandle, ServiceError> {
        self.sessions
            .read()
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::NotFound(format!("no session `{id}`")))
    }

    pub fn len(&self) -> usize {
        self.sessions.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Writes `<snapshot_dir>/<id>.json` when snapshots are enabled.
    pub fn persist(&self, session: &Session) -> Result<(), ServiceError> {
        let Some(dir) = &self.snapshot_dir else { return Ok(()) };
        std::fs::create_dir_all(dir).map_err(|e| ServiceError::Io(format!("{}: {e}", dir.display())))?;
        let path = dir.join(format!("{}.json", session.id));
        let text = serde_json::to_string_pretty(&session.snapshot()).expect("snapshot serializes");
        std::fs::write(&path, text).map_err(|e| ServiceError::Io(format!("{}: {e}", path.display())))
    }

    /// Restores every `*.json` snapshot in the snapshot directory.
    pub fn restore(&self) -> Result<usize, ServiceError> {
        let Some(dir) = &self.snapshot_dir else { return Ok(0) };
        if !dir.exists() {
            return Ok(0);
        }
        let entries = std::fs::read_dir(dir).map_err(|e| ServiceError::Io(format!("{}: {e}", dir.display())))?;
        let mut restored = 0;
        for entry in entries.flatten() {
            let path = entry.path();
            let Some(id) = snapshot_id(&path) else { continue };
            let text = crate::read_file(&path)?;
            let upload: SessionUpload =
                serde_json::from_str(&text).map_err(|e| ServiceError::Invalid(format!("{}: {e}", path.display())))?;
            let session = Session::create(id.clone(), &upload, &self.settings)?;
            self.sessions.write().insert(id, Arc::new(RwLock::new(session)));
            restored += 1;
        }
        Ok(restored)
    }
}

fn snapshot_id(path: &Path) -> Option<String> {
    if path.extension()? != "json" {
        return None;
    }
    Some(path.file_stem()?.to_str()?.to_owned())
}
