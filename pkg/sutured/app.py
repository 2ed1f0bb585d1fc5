import logging

from flask import Flask, jsonify

from sutured.config import Config


def create_app(config_object=Config):
    app = Flask(__name__)
    app.config.from_object(config_object)
    logging.basicConfig(level=app.config.get('SUTURED_LOG_LEVEL', 'WARNING'))

    from sutured.routes.disk_routes import disk_routes
    from sutured.routes.surface_routes import surface_routes
    app.register_blueprint(surface_routes)
    app.register_blueprint(disk_routes)

    @app.route('/')
    def index():
        """List the API endpoints"""
        endpoints = [
            {"path": rule.rule, "methods": sorted(rule.methods - {"HEAD", "OPTIONS"})}
            for rule in sorted(app.url_map.iter_rules(), key=lambda r: r.rule)
            if rule.endpoint != 'static'
        ]
        return jsonify({"name": "sutured", "endpoints": endpoints})

    return app


if __name__ == '__main__':
    app = create_app()
    app.run(debug=True)
