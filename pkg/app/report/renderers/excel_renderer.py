import io
import math

from openpyxl import Workbook
from openpyxl.styles import Alignment, Border, Font, PatternFill, Side
from openpyxl.utils import get_column_letter

XLSX_MIME = "application/vnd.openxmlformats-officedocument.spreadsheetml.sheet"


def _value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def generate_excel(data: dict):
    wb = Workbook()
    ws = wb.active
    ws.title = data.get("title", "Sheet1")

    header_font = Font(bold=True, color="FFFFFF")
    header_fill = PatternFill(start_color="4F81BD", fill_type="solid")
    header_align = Alignment(horizontal="center", vertical="center")
    violated_fill = PatternFill(start_color="F4CCCC", fill_type="solid")
    thin_border = Border(
        left=Side(style="thin"),
        right=Side(style="thin"),
        top=Side(style="thin"),
        bottom=Side(style="thin"),
    )

    headers = data.get("headers", [])
    ws.append(headers)

    for col_num, cell in enumerate(ws[1], 1):
        cell.font = header_font
        cell.fill = header_fill
        cell.alignment = header_align
        cell.border = thin_border
        ws.column_dimensions[get_column_letter(col_num)].width = 24

    items = data.get("items", [])
    for item in items:
        ws.append([_value(item.get(h)) for h in headers])

    # 위반된 점(satisfied == False)은 붉은색으로 표시
    flag_col = headers.index("satisfied") + 1 if "satisfied" in headers else None
    for row in ws.iter_rows(min_row=2, max_row=len(items) + 1, min_col=1, max_col=len(headers)):
        violated = flag_col is not None and row[flag_col - 1].value is False
        for cell in row:
            cell.border = thin_border
            cell.alignment = Alignment(horizontal="right")
            if isinstance(cell.value, float):
                cell.number_format = "0.00000000000E+00"
            if violated:
                cell.fill = violated_fill

    ws.freeze_panes = "A2"

    output = io.BytesIO()
    wb.save(output)
    output.seek(0)

    return output.read(), "xlsx", XLSX_MIME
