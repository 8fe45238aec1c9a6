import os
from datetime import datetime
from typing import Any, Dict, List, Optional

import pandas as pd

import config
from services.stdcells import catalog
from services.verifier_service import Verifier
from utils.exceptions import RevSeqError

REPORT_EXTENSIONS = ('.csv', '.xlsx')


class ReportService:
    def __init__(self, reports_dir: Optional[str] = None, cap: Optional[int] = None):
        self.reports_dir = reports_dir or config.REPORTS_DIR
        self.verifier = Verifier(cap)
        os.makedirs(self.reports_dir, exist_ok=True)

    def cell_rows(self, n: Optional[int] = None) -> List[Dict[str, Any]]:
        """One row per catalog cell: cost metrics plus reversibility verdicts"""
        rows = []
        for entry in catalog(n):
            reversible = self.verifier.check_reversible(entry.circuit, "auto")
            conservative = self.verifier.check_conservative(entry.circuit, "auto")
            m = entry.metrics
            rows.append({
                'Cell': entry.name,
                'Gates': m.gate_count,
                'Garbage': m.garbage_count,
                'Ancilla': m.ancilla_count,
                'Inputs': m.primary_input_count,
                'Outputs': m.primary_output_count,
                'States': m.state_count,
                'Reversible': reversible.ok,
                'Conservative': conservative.ok,
                'Strategy': reversible.strategy,
            })
        return rows

    def _filename(self, n: Optional[int], extension: str) -> str:
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S_%f")
        width = config.DEFAULT_WIDTH if n is None else n
        return f"revseq_cell_report_n{width}_{timestamp}{extension}"

    def generate_csv_report(self, n: Optional[int] = None) -> str:
        """Generate CSV report of the cell catalog"""
        try:
            df = pd.DataFrame(self.cell_rows(n))
            filename = self._filename(n, '.csv')
            df.to_csv(os.path.join(self.reports_dir, filename), index=False)
            return filename
        except RevSeqError:
            raise
        except Exception as e:
            raise RuntimeError(f"Error generating CSV report: {str(e)}") from e

    def generate_excel_report(self, n: Optional[int] = None) -> str:
        """Generate Excel report with a summary sheet and a per-cell sheet"""
        try:
            rows = self.cell_rows(n)
            filename = self._filename(n, '.xlsx')
            filepath = os.path.join(self.reports_dir, filename)

            with pd.ExcelWriter(filepath, engine='openpyxl') as writer:
                cells_df = pd.DataFrame(rows)
                summary_df = pd.DataFrame({
                    'Register Width': [config.DEFAULT_WIDTH if n is None else n],
                    'Cells': [len(rows)],
                    'Total Gates': [int(cells_df['Gates'].sum())],
                    'Total Garbage': [int(cells_df['Garbage'].sum())],
                    'All Reversible': [bool(cells_df['Reversible'].all())],
                    'All Conservative': [bool(cells_df['Conservative'].all())],
                    'Report Generated': [datetime.now().strftime("%Y-%m-%d %H:%M:%S")],
                })
                summary_df.to_excel(writer, sheet_name='Summary', index=False)
                cells_df.to_excel(writer, sheet_name='Cells', index=False)

            return filename
        except RevSeqError:
            raise
        except Exception as e:
            raise RuntimeError(f"Error generating Excel report: {str(e)}") from e

    def get_report_path(self, filename: str) -> str:
        """Get full path to report file"""
        return os.path.join(self.reports_dir, os.path.basename(filename))

    def list_reports(self) -> List[Dict[str, Any]]:
        """List all generated reports"""
        try:
            reports = []
            for filename in os.listdir(self.reports_dir):
                if filename.endswith(REPORT_EXTENSIONS):
                    stats = os.stat(os.path.join(self.reports_dir, filename))
                    reports.append({
                        'filename': filename,
                        'size': stats.st_size,
                        'created': datetime.fromtimestamp(stats.st_mtime).strftime("%Y-%m-%d %H:%M:%S"),
                    })
            return sorted(reports, key=lambda x: (x['created'], x['filename']), reverse=True)
        except Exception as e:
            raise RuntimeError(f"Error listing reports: {str(e)}") from e

    def delete_report(self, filename: str) -> bool:
        """Delete a report file"""
        try:
            filepath = self.get_report_path(filename)
            if os.path.exists(filepath):
                os.remove(filepath)
                return True
            return False
        except Exception as e:
            raise RuntimeError(f"Error deleting report: {str(e)}") from e
