from fastapi import APIRouter, HTTPException

from schemas import CheckReport, CheckRequest, Metrics, NetlistRequest, TableRequest, TableResponse
from services.netlist_io import parse_netlist
from services.netlist_service import metrics
from services.verifier_service import Verifier, check_report, invalid_report
from utils.exceptions import NetlistSemanticError, RevSeqError

router = APIRouter()


@router.post("/check", response_model=CheckReport)
async def check_circuit(request: CheckRequest):
    """
    Validate a netlist and check reversibility and conservativity
    """
    try:
        try:
            circuit = parse_netlist(request.netlist)
        except NetlistSemanticError as e:
            return invalid_report(e)
        return check_report(circuit, request.strategy, request.cap)

    except RevSeqError:
        raise
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Error checking circuit: {str(e)}")


@router.post("/metrics", response_model=Metrics)
async def circuit_metrics(request: NetlistRequest):
    """
    Gate, garbage and ancilla counts of a netlist
    """
    try:
        return metrics(parse_netlist(request.netlist))

    except RevSeqError:
        raise
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Error computing metrics: {str(e)}")


@router.post("/table", response_model=TableResponse)
async def behavior_table(request: TableRequest):
    """
    Behavior table over primary inputs and state feedback, constants pinned
    """
    try:
        table = Verifier(request.cap).behavior_table(parse_netlist(request.netlist))
        return TableResponse(
            input_nets=table.input_nets,
            terminal_nets=table.terminal_nets,
            rows=[[list(inputs), list(outputs)] for inputs, outputs in table.iter_rows()],
        )

    except RevSeqError:
        raise
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Error building behavior table: {str(e)}")
