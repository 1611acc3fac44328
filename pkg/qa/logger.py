#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
GaussFactor - Laadunvarmistusloki (QA Logger)

Kerää ja tallentaa komentoriviajojen tiedot regressiotestausta varten:
- Järjestelmätiedot (CPU, OS, Python, NumPy)
- Komento, parametrit ja tulos (OutputRecord)
- Suoritusaika

Käyttö:
    from qa.logger import OutputRecord, RunLogger

    record = OutputRecord(command='check 157573 17', parameters={...},
                          result={...}, version='1.0.0', elapsed_s=0.01)
    qa = RunLogger(output_dir="qa_logs/")
    qa.log(record)
    qa.save()
"""

import csv
import datetime
import json
import os
import platform
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np


@dataclass
class OutputRecord:
    """
    Yhden ajon tulostietue. Kenttien järjestys on kiinteä ja
    JSON-sarjallistus palautuu häviöttä (from_json(to_json()) == alkuperäinen).
    """
    command: str
    parameters: Dict[str, Any]
    result: Dict[str, Any]
    version: str
    elapsed_s: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, indent=2, allow_nan=False)

    @classmethod
    def from_json(cls, text: str) -> 'OutputRecord':
        data = json.loads(text)
        names = [f.name for f in fields(cls)]
        return cls(**{name: data.get(name) for name in names})


class RunLogger:
    """
    Ajoloki: JSON (kaikki tietueet) ja CSV (yhteenveto).
    """

    # Lokin versio - päivitetään jos rakenne muuttuu
    VERSION = "1.0.0"

    def __init__(self, output_dir: str = ".", log_name: str = "gauss_run_log"):
        """
        Args:
            output_dir: Hakemisto johon lokit tallennetaan
            log_name: Lokitiedoston perusnimi (ilman päätettä)
        """
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)

        self.json_path = self.output_dir / f"{log_name}.json"
        self.csv_path = self.output_dir / f"{log_name}.csv"

        self.log_entries = self._load_existing_log()
        self.system_info = self._collect_system_info()

    def _load_existing_log(self) -> List[Dict]:
        """Lataa olemassa oleva JSON-loki."""
        if self.json_path.exists():
            try:
                with open(self.json_path, 'r', encoding='utf-8') as f:
                    return json.load(f).get('entries', [])
            except (json.JSONDecodeError, AttributeError):
                print("  QA: Varoitus - olemassa olevaa lokia ei voitu lukea, luodaan uusi")
        return []

    def _collect_system_info(self) -> Dict:
        """Kerää järjestelmätiedot."""
        info = {
            'os': f"{platform.system()} {platform.release()}",
            'machine': platform.machine(),
            'python_version': platform.python_version(),
            'numpy_version': np.__version__,
            'cpu_count': os.cpu_count(),
        }
        if platform.system() == 'Linux':
            try:
                with open('/proc/cpuinfo', 'r') as f:
                    for line in f:
                        if 'model name' in line:
                            info['cpu_name'] = line.split(':')[1].strip()
                            break
            except OSError:
                pass
        return info

    def log(self, record: OutputRecord):
        """Lisää tietueen lokiin (tallennus save():lla)."""
        self.log_entries.append({
            'timestamp': datetime.datetime.now().isoformat(),
            'record': record.to_dict(),
        })

    def save(self):
        """Tallentaa lokin JSON- ja CSV-muodossa."""
        data = {
            'qa_logger_version': self.VERSION,
            'updated': datetime.datetime.now().isoformat(),
            'system': self.system_info,
            'entries': self.log_entries,
        }
        with open(self.json_path, 'w', encoding='utf-8') as f:
            json.dump(data, f, ensure_ascii=False, indent=2)

        with open(self.csv_path, 'w', encoding='utf-8', newline='') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(['timestamp', 'command', 'version', 'elapsed_s'])
            for entry in self.log_entries:
                rec = entry['record']
                writer.writerow([entry['timestamp'], rec['command'], rec['version'],
                                 '' if rec['elapsed_s'] is None else rec['elapsed_s']])

    def get_summary(self) -> Dict:
        """Yhteenveto: ajojen määrä komennoittain."""
        by_command: Dict[str, int] = {}
        for entry in self.log_entries:
            name = entry['record']['command'].split(' ', 1)[0]
            by_command[name] = by_command.get(name, 0) + 1
        return {'n_runs': len(self.log_entries), 'by_command': by_command}
