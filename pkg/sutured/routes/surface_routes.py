from flask import Blueprint, jsonify, request

from sutured.routes import get_service, respond
from sutured.utils.helpers import log_error

surface_routes = Blueprint('surface_routes', __name__)


@surface_routes.route('/api/surface/validate', methods=['POST'])
def validate_surface():
    """Endpoint to list the violated invariants of a surface"""
    data = request.get_json(silent=True)
    if not data:
        return jsonify({"error": "No surface provided"}), 400
    return respond(get_service().validate_surface(data))


@surface_routes.route('/api/surface/homology', methods=['POST'])
def homology():
    """Endpoint to compute H1(surface, alpha+) of a surface"""
    data = request.get_json(silent=True)
    if not data:
        return jsonify({"error": "No surface provided"}), 400
    surface = data.get('surface', data)
    return respond(get_service().homology(surface, data.get('ring'), data.get('walks')))


@surface_routes.route('/api/contact', methods=['POST'])
def contact_element():
    """Endpoint to compute the contact element of a chord diagram or dividing set"""
    data = request.get_json(silent=True)
    if not data:
        return jsonify({"error": "No diagram or dividing set provided"}), 400
    service = get_service()
    if 'diagram' in data:
        return respond(service.contact_element(diagram=data['diagram'], ring=data.get('ring')))
    return respond(service.contact_element(dividing_set=data.get('dividing_set', data), ring=data.get('ring')))


@surface_routes.route('/api/glue', methods=['POST'])
def glue():
    """Endpoint to glue a surface and report the gluing morphism"""
    data = request.get_json(silent=True)
    if not data or 'surface' not in data or 'gluing' not in data:
        return jsonify({"error": "Both surface and gluing are required"}), 400
    try:
        return respond(get_service().glue(data, data.get('ring')))
    except Exception as e:
        log_error(f"Error gluing surface: {str(e)}")
        return jsonify({"error": str(e)}), 500
