"""
TransducerSimulator - HTTP trigger
Runs one transducer experiment per request and returns its table as JSON
"""
import logging
import json
import uuid
import azure.functions as func

from .models.response_model import SimulatorResponse
from .models.run_data import GridSpec
from .services.config_loader import ConfigError, parse_config
from .services.network_service import EFFICIENCY_MODES, SingularNetworkError
from .services.piezo_service import ExtractionError
from .services.simulations import (
    run_admittance,
    run_derive,
    run_efficiency,
    run_s11,
    run_sweep,
    run_transmission,
)

OPERATIONS = ("derive", "efficiency", "s11", "admittance", "transmission", "sweep")


def main(req: func.HttpRequest) -> func.HttpResponse:
    """
    HTTP handler - dispatches on "operation".

    Expected POST body:
    {
        "operation": "efficiency",
        "config": {"omega_c_1": 193e12, "kappa_ex": 125e6, ...},
        "grid": {"fmin_hz": 3.2e9, "fmax_hz": 3.3e9, "points": 2001},
        "mode": "rwa"
    }
    """
    request_id = str(uuid.uuid4())[:8]
    logging.info(f"[{request_id}] TransducerSimulator triggered")

    if req.method != "POST":
        return _error_response("Method not allowed", 405)

    try:
        body = req.get_json()
    except ValueError:
        logging.warning(f"[{request_id}] Invalid JSON body")
        return _error_response("Invalid JSON body", 400)
    if not isinstance(body, dict):
        return _error_response("Request body must be a JSON object", 400)

    operation = str(body.get("operation") or "").strip().lower()
    if operation not in OPERATIONS:
        logging.warning(f"[{request_id}] Unknown operation: {operation!r}")
        return _error_response(f"Unknown operation '{operation}'. Expected one of: {', '.join(OPERATIONS)}", 400)

    try:
        config = parse_config(body.get("config"))
    except ConfigError as e:
        logging.warning(f"[{request_id}] Configuration rejected: {e.errors}")
        return _error_response(f"Invalid configuration ({e.key}): {e}", 422, operation=operation,
                               data={"key": e.key, "errors": e.errors})

    try:
        grid = GridSpec.from_dict(body.get("grid"))
        result = _dispatch(operation, config, grid, body)
    except (KeyError, TypeError, ValueError) as e:
        logging.warning(f"[{request_id}] Bad request for {operation}: {e}")
        return _error_response(f"Invalid request: {e}", 400, operation=operation)
    except SingularNetworkError as e:
        logging.error(f"[{request_id}] Singular network: {e}")
        return _error_response(str(e), 500, operation=operation, data={"omega": e.omega})
    except ExtractionError as e:
        logging.error(f"[{request_id}] BVD extraction failed: {e}")
        return _error_response(str(e), 500, operation=operation)
    except Exception as e:
        logging.error(f"[{request_id}] Unexpected error: {str(e)}", exc_info=True)
        return _error_response("Internal server error", 500, operation=operation)

    logging.info(f"[{request_id}] {operation} finished: {len(result.frame)} rows")
    response = SimulatorResponse(
        success=True,
        message=f"{operation} completed",
        operation=operation,
        data=result.to_dict(),
    )
    return func.HttpResponse(
        json.dumps(response.to_dict()),
        status_code=200,
        mimetype="application/json"
    )


def _dispatch(operation: str, config, grid, body: dict):
    if operation == "derive":
        return run_derive(config)
    if operation == "efficiency":
        mode = body.get("mode", "rwa")
        if mode not in EFFICIENCY_MODES:
            raise ValueError(f"mode must be one of {EFFICIENCY_MODES}")
        return run_efficiency(config, grid, mode=mode, terms=body.get("terms", "exact"),
                              target=body.get("target", "symmetric"))
    if operation == "s11":
        return run_s11(config, grid)
    if operation == "admittance":
        return run_admittance(config, grid, extract=bool(body.get("extract", False)))
    if operation == "transmission":
        return run_transmission(config, grid)
    return run_sweep(config, body["powers_w"], body["kappa_ex_hz"], grid=grid, mode=body.get("mode", "rwa"))


def _error_response(message: str, status_code: int, operation: str = None, data: dict = None) -> func.HttpResponse:
    response = SimulatorResponse(success=False, message=message, operation=operation, data=data, error=message)
    return func.HttpResponse(
        json.dumps(response.to_dict()),
        status_code=status_code,
        mimetype="application/json"
    )
