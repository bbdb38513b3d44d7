# -*- coding: utf-8 -*-
"""
Persists run artifacts: trajectory checkpoints, norm-series CSVs, decay reports,
the appended inequality-check table and the run manifest.

Numbers are written with 17 significant digits so that files compare byte for
byte between identical runs.
"""

import csv
import hashlib
import json
import logging
import os
import platform
from datetime import datetime
from importlib import metadata
from typing import Any, Dict, Iterable, List, Optional

import pytz

from checks.common import CHECK_TABLE_HEADER, InequalityCheck
from decay.report import EXPONENT_TABLE_HEADER, DecayReport
from spaces.kato import NormSeries
from spaces.trajectory import Trajectory
from spectral.field_io import write_field

log = logging.getLogger(__name__)

MANIFEST_NAME = 'manifest.json'
SERIES_HEADER = ['t', 'raw_norm', 'rescaled_norm', 's', 'q', 'n']
CHECKPOINT_COUNT = 10
SUBDIRS = ('trajectory', 'series', 'reports', 'plot')
TRACKED_PACKAGES = ('numpy', 'scipy', 'PyYAML', 'python-dotenv', 'pytz', 'requests')


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def prepare_output_dir(output_dir: str) -> Dict[str, str]:
    """Creates the artifact layout and returns the subdirectory paths by name."""
    paths = {'root': output_dir}
    for name in SUBDIRS:
        paths[name] = os.path.join(output_dir, name)
        os.makedirs(paths[name], exist_ok=True)
    return paths


def config_hash(config: Dict[str, Any]) -> str:
    payload = json.dumps(config, sort_keys=True, default=str, ensure_ascii=True)
    return hashlib.sha256(payload.encode('utf-8')).hexdigest()


def package_versions() -> Dict[str, str]:
    versions = {'python': platform.python_version()}
    for name in TRACKED_PACKAGES:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = 'not installed'
    return versions


def timestamp(timezone: str) -> str:
    return datetime.now(pytz.timezone(timezone)).isoformat(timespec='seconds')


def series_filename(series: NormSeries) -> str:
    return f"{series.kind}_s{series.spec.s:g}_q{series.spec.q:g}_n{series.n}.csv"


# --- Writers ---

def write_checkpoints(traj: Trajectory, directory: str, count: int = CHECKPOINT_COUNT) -> List[str]:
    """Writes about `count` evenly spaced samples plus the final one as .nsf files."""
    stride = max(1, (len(traj) - 1) // count)
    indices = sorted(set(range(0, len(traj), stride)) | {len(traj) - 1})
    paths = []
    for i in indices:
        path = os.path.join(directory, f"u_{i:05d}.nsf")
        write_field(path, traj.sample(i), float(traj.times[i]))
        paths.append(path)
    log.info(f"Wrote {len(paths)} trajectory checkpoints to '{directory}'")
    return paths


def write_series_csv(series: NormSeries, directory: str) -> str:
    path = os.path.join(directory, series_filename(series))
    with open(path, 'w', newline='', encoding='utf-8') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(SERIES_HEADER)
        for t, raw, rescaled, s, q, n in series.rows():
            writer.writerow([_fmt(t), _fmt(raw), _fmt(rescaled), _fmt(s), _fmt(q), str(n)])
    return path


def write_decay_reports(reports: Iterable[DecayReport], directory: str) -> List[str]:
    """decay_reports.txt (key: value records separated by blank lines) and exponent_table.csv."""
    reports = list(reports)
    text_path = os.path.join(directory, 'decay_reports.txt')
    table_path = os.path.join(directory, 'exponent_table.csv')
    with open(text_path, 'w', encoding='utf-8') as f:
        records = ["\n".join(f"{key}: {value}" for key, value in r.to_record().items()) for r in reports]
        f.write("\n\n".join(records) + ("\n" if records else ""))
    with open(table_path, 'w', newline='', encoding='utf-8') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(EXPONENT_TABLE_HEADER)
        for report in reports:
            writer.writerow(report.table_row())
    log.info(f"Wrote {len(reports)} decay reports to '{directory}'")
    return [text_path, table_path]


def append_inequality_checks(checks: Iterable[InequalityCheck], path: str) -> str:
    new_file = not os.path.exists(path)
    try:
        with open(path, 'a', newline='', encoding='utf-8') as f:
            writer = csv.writer(f, lineterminator='\n')
            if new_file:
                writer.writerow(CHECK_TABLE_HEADER)
            for check in checks:
                writer.writerow(check.table_row())
    except IOError as e:
        log.error(f"Could not append inequality checks to '{path}': {e}")
        raise
    return path


# --- Manifest ---

def save_manifest(manifest: Dict[str, Any], output_dir: str) -> str:
    path = os.path.join(output_dir, MANIFEST_NAME)
    try:
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(manifest, f, indent=4, sort_keys=True, default=str)
    except IOError as e:
        log.error(f"Could not write manifest at '{path}': {e}")
        raise
    return path


def load_manifest(output_dir: str) -> Optional[Dict[str, Any]]:
    """Returns the manifest of a run directory, or None when it is missing or unreadable."""
    path = os.path.join(output_dir, MANIFEST_NAME)
    if not os.path.exists(path):
        return None
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except (json.JSONDecodeError, IOError) as e:
        log.error(f"Could not read or parse manifest at '{path}': {e}")
        return None
