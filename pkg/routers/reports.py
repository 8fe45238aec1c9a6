from fastapi import APIRouter, HTTPException, Query
from fastapi.responses import FileResponse
from typing import Optional
import os

from schemas import ReportResponse
from services.report_service import ReportService
from utils.exceptions import RevSeqError

router = APIRouter()
report_service = ReportService()

MEDIA_TYPES = {
    '.csv': "text/csv",
    '.xlsx': "application/vnd.openxmlformats-officedocument.spreadsheetml.sheet",
}


@router.get("/generate-report", response_model=ReportResponse)
async def generate_report(
    format: str = Query("csv", description="Report format: csv or xlsx"),
    n: Optional[int] = Query(None, description="Width of register-like cells"),
):
    """
    Generate a downloadable cost report of the cell catalog
    """
    try:
        format_lower = format.lower()
        if format_lower == 'xlsx':
            filename = report_service.generate_excel_report(n)
        elif format_lower == 'csv':
            filename = report_service.generate_csv_report(n)
        else:
            raise HTTPException(status_code=400, detail=f"Unsupported report format: {format}")

        return ReportResponse(report_url=f"/api/download-report/{filename}")

    except (HTTPException, RevSeqError):
        raise
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Error generating report: {str(e)}")


@router.get("/download-report/{filename}")
async def download_report(filename: str):
    """
    Download a generated report file
    """
    try:
        filepath = report_service.get_report_path(filename)

        if not os.path.exists(filepath):
            raise HTTPException(status_code=404, detail="Report file not found")

        media_type = MEDIA_TYPES.get(os.path.splitext(filename)[1], "application/octet-stream")
        return FileResponse(path=filepath, filename=filename, media_type=media_type)

    except HTTPException:
        raise
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Error downloading report: {str(e)}")


@router.get("/reports")
async def list_reports():
    """
    List all generated reports
    """
    try:
        return {"reports": report_service.list_reports()}

    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Error listing reports: {str(e)}")


@router.delete("/reports/{filename}")
async def delete_report(filename: str):
    """
    Delete a report file
    """
    try:
        if report_service.delete_report(filename):
            return {"message": f"Report {filename} deleted successfully"}
        raise HTTPException(status_code=404, detail="Report file not found")

    except HTTPException:
        raise
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Error deleting report: {str(e)}")
