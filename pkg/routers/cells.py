from fastapi import APIRouter, HTTPException, Query
from typing import List, Optional

from schemas import CellResponse, CellSummary
from services.netlist_io import emit_netlist
from services.netlist_service import metrics
from services.stdcells import CELL_NAMES, build_cell
from utils.exceptions import RevSeqError

router = APIRouter()


@router.get("/cells", response_model=List[CellSummary])
async def list_cells(n: Optional[int] = Query(None, description="Width of register-like cells")):
    """
    List every catalog cell with its cost metrics
    """
    try:
        return [CellSummary(name=name, metrics=metrics(build_cell(name, n))) for name in CELL_NAMES]

    except RevSeqError:
        raise
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Error listing cells: {str(e)}")


@router.get("/cells/{name}", response_model=CellResponse)
async def get_cell(name: str, n: Optional[int] = Query(None, description="Width of register-like cells")):
    """
    Canonical netlist and metrics of one cell
    """
    try:
        circuit = build_cell(name, n)
        return CellResponse(name=name, metrics=metrics(circuit), netlist=emit_netlist(circuit))

    except RevSeqError:
        raise
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Error building cell: {str(e)}")
