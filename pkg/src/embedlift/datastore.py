import os
import re
from pathlib import Path

from pydantic import computed_field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

default_data_path = Path(os.getcwd()) / "data"


class DataStore(BaseSettings):
    """Default location of run outputs and logs.

    The root can be set in an env-file `.datastore`:

    ```
    DATA_DIR=path/to/data/dir
    ```

    Parameters
    ----------
    data_dir : Path
        Root of `runs_dir` and `logs_dir`. Defaults to ./data.
    """

    data_dir: Path = default_data_path
    model_config = SettingsConfigDict(env_file=(".datastore"), extra="ignore")

    @field_validator("data_dir", mode="after")
    def ensure_directory_exists(cls, v: Path) -> Path:
        v.mkdir(parents=True, exist_ok=True)
        return v

    @computed_field
    @property
    def runs_dir(self) -> Path:
        runs_dir = self.data_dir / "runs"
        runs_dir.mkdir(exist_ok=True, parents=True)
        return runs_dir

    @computed_field
    @property
    def logs_dir(self) -> Path:
        logs_dir = self.data_dir / "logs"
        logs_dir.mkdir(exist_ok=True, parents=True)
        return logs_dir

    def run_dir(self, name: str) -> Path:
        """Output directory of an experiment, e.g. the config file stem."""
        slug = re.sub(r"[^A-Za-z0-9_.-]+", "_", name).strip("_") or "run"
        run_dir = self.runs_dir / slug
        run_dir.mkdir(exist_ok=True, parents=True)
        return run_dir


datastore = DataStore()
