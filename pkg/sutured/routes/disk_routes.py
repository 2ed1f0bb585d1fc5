from flask import Blueprint, jsonify, request

from sutured.routes import get_service, respond

disk_routes = Blueprint('disk_routes', __name__)


@disk_routes.route('/api/disk/enumerate/<int:n>', methods=['GET'])
def enumerate_diagrams(n):
    """Endpoint to list the chord diagrams on n sutured pairs with their contact elements"""
    return respond(get_service().enumerate_diagrams(n, request.args.get('ring')))


@disk_routes.route('/api/disk/match', methods=['POST'])
def match():
    """Endpoint to decide whether two chord diagrams glue to a single circle"""
    data = request.get_json(silent=True)
    if not data or 'first' not in data or 'second' not in data:
        return jsonify({"error": "Two diagrams are required"}), 400
    return respond(get_service().match(data['first'], data['second']))


@disk_routes.route('/api/disk/torus', methods=['POST'])
def torus():
    """Endpoint for the solid-torus tightness pairing"""
    data = request.get_json(silent=True)
    required = ['diagram', 'n', 'p', 'q']
    if not data or any(key not in data for key in required):
        return jsonify({"error": f"Fields {required} are required"}), 400
    return respond(get_service().torus(data['diagram'], data['n'], data['p'], data['q'], data.get('base', 0)))


@disk_routes.route('/api/disk/bypass', methods=['POST'])
def bypass():
    """Endpoint to list the bypass triples of a chord diagram"""
    data = request.get_json(silent=True)
    if not data or 'diagram' not in data:
        return jsonify({"error": "No diagram provided"}), 400
    return respond(get_service().bypass(data['diagram'], data.get('ring')))
