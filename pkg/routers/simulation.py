from fastapi import APIRouter, HTTPException
from pydantic import ValidationError

from schemas import SimulationRequest, SimulationResponse, Stimulus
from services.netlist_io import parse_netlist
from services.simulator import Simulator
from services.vcd_service import emit_vcd
from utils.exceptions import RevSeqError

router = APIRouter()


@router.post("/simulate", response_model=SimulationResponse)
async def simulate(request: SimulationRequest):
    """
    Run a stimulus through a sequential netlist, optionally returning a VCD dump
    """
    try:
        simulator = Simulator(parse_netlist(request.netlist))
        try:
            stimulus = Stimulus(input_names=request.input_names, steps=request.steps)
        except ValidationError as e:
            raise HTTPException(status_code=400, detail=f"Invalid stimulus: {e.errors()[0]['msg']}")

        trace = simulator.run(stimulus, request.initial_state)
        return SimulationResponse(
            trace=trace,
            final_state=trace.final_state,
            vcd=emit_vcd(trace) if request.vcd else None,
        )

    except (HTTPException, RevSeqError):
        raise
    except Exception as e:
        raise HTTPException(status_code=500, detail=f"Error simulating circuit: {str(e)}")
