from flask import current_app, jsonify

from sutured.services.tqft_service import TqftService


def get_service():
    return TqftService(current_app.config.get('SUTURED_DEFAULT_RING'))


def respond(result):
    """Turn a service result into a JSON response."""
    if result["success"]:
        return jsonify(result), 200
    body = {"error": result["error"]}
    if "violations" in result:
        body["violations"] = result["violations"]
    return jsonify(body), 400
