"""
Report Service - pandas tables and formatted Excel export
File: services/report_service.py
"""

from typing import Dict, Mapping, Sequence
import logging

import pandas as pd
from openpyxl.styles import Alignment, Border, Font, PatternFill, Side


logger = logging.getLogger(__name__)

STATUS_FILLS = {
    'pass': "DCFCE7",
    'fail': "FEE2E2",
    'cited': "E5E7EB",
}


class ReportService:
    """Tables of results and their xlsx export"""

    def reproduction_table(self, rows: Sequence[Mapping]) -> pd.DataFrame:
        """Expected vs computed values, one row per quantity"""
        columns = ['family', 'quantity', 'expected', 'computed', 'status', 'citation']
        df = pd.DataFrame([{c: row.get(c, '') for c in columns} for row in rows], columns=columns)
        for col in ('expected', 'computed'):
            df[col] = df[col].map(_cell)
        return df

    def checks_table(self, report: Mapping) -> pd.DataFrame:
        """One row per check of a Report.to_dict() payload"""
        return pd.DataFrame(
            [{'check': c['name'], 'status': c['status'], 'detail': c['detail']} for c in report['checks']],
            columns=['check', 'status', 'detail'],
        )

    def cohomology_table(self, by_homogeneity: Mapping[str, int]) -> pd.DataFrame:
        return pd.DataFrame(
            [{'homogeneity': int(h), 'dim': d} for h, d in by_homogeneity.items()],
            columns=['homogeneity', 'dim'],
        ).sort_values('homogeneity')

    def histogram_table(self, histogram: Mapping[str, int]) -> pd.DataFrame:
        df = pd.DataFrame(
            [{'dim': int(d), 'count': c} for d, c in histogram.items()],
            columns=['dim', 'count'],
        ).sort_values('dim')
        total = df['count'].sum()
        df['share'] = (df['count'] / total).round(4) if total else 0.0
        return df

    def summary(self, df: pd.DataFrame) -> Dict[str, int]:
        counts = df['status'].value_counts().to_dict() if 'status' in df else {}
        return {s: int(counts.get(s, 0)) for s in ('pass', 'fail', 'cited')}

    def render(self, df: pd.DataFrame) -> str:
        return df.to_string(index=False)

    def export_to_excel(self, data_dict: Dict[str, pd.DataFrame], output_path: str, with_formatting: bool = True) -> bool:
        """
        Export DataFrames to one workbook, one sheet each

        Args:
            data_dict: sheet name -> DataFrame
            output_path: target .xlsx path
            with_formatting: style headers, borders, widths and status colours

        Returns:
            True if successful
        """
        try:
            with pd.ExcelWriter(output_path, engine='openpyxl') as writer:
                for sheet_name, df in data_dict.items():
                    df.to_excel(writer, sheet_name=sheet_name[:31], index=False)
                    if with_formatting:
                        self._apply_formatting(writer.sheets[sheet_name[:31]], df)
            logger.info(f"Exported {len(data_dict)} sheets to {output_path}")
            return True
        except Exception as e:
            logger.error(f"Error exporting to Excel: {str(e)}")
            return False

    def _apply_formatting(self, worksheet, df: pd.DataFrame):
        header_font = Font(bold=True, color="FFFFFF", size=12)
        header_fill = PatternFill(start_color="4F46E5", end_color="4F46E5", fill_type="solid")
        header_alignment = Alignment(horizontal="center", vertical="center")
        border = Border(
            left=Side(style='thin'),
            right=Side(style='thin'),
            top=Side(style='thin'),
            bottom=Side(style='thin'),
        )

        for cell in worksheet[1]:
            cell.font = header_font
            cell.fill = header_fill
            cell.alignment = header_alignment

        for column in worksheet.columns:
            width = max(len(str(cell.value)) if cell.value is not None else 0 for cell in column)
            worksheet.column_dimensions[column[0].column_letter].width = min(width + 2, 60)

        for row in worksheet.iter_rows(min_row=1, max_row=worksheet.max_row,
                                       min_col=1, max_col=worksheet.max_column):
            for cell in row:
                cell.border = border

        # colour whole rows by status
        if 'status' in df.columns:
            status_col = list(df.columns).index('status') + 1
            for row_idx in range(2, worksheet.max_row + 1):
                status = worksheet.cell(row=row_idx, column=status_col).value
                colour = STATUS_FILLS.get(str(status))
                if colour:
                    fill = PatternFill(start_color=colour, end_color=colour, fill_type="solid")
                    for col_idx in range(1, worksheet.max_column + 1):
                        worksheet.cell(row=row_idx, column=col_idx).fill = fill


def _cell(value) -> str:
    if isinstance(value, (list, tuple)):
        return "(" + ", ".join(str(v) for v in value) + ")"
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)
