import logging
import os

from flask import Flask, jsonify
from flask_cors import CORS

from qualitative_decision.exceptions import BudgetExceeded, QDTError, SynthesisError

# Configure logging
logging.basicConfig(level=os.getenv('QDT_LOG_LEVEL', 'INFO').upper())
logger = logging.getLogger(__name__)


def create_app() -> Flask:
    app = Flask(__name__)

    # Configure CORS
    CORS(app, resources={
        r"/api/*": {
            "origins": os.getenv('QDT_CORS_ORIGINS', 'http://localhost:3002').split(','),
            "methods": ["GET", "POST", "OPTIONS"],
            "allow_headers": ["Content-Type"],
            "max_age": 600,
        }
    })

    @app.errorhandler(BudgetExceeded)
    def handle_budget(error):
        logger.error(f'[api] Budget exceeded: {str(error)}')
        return jsonify({'error': str(error), 'size': error.size, 'budget': error.budget}), 413

    @app.errorhandler(SynthesisError)
    def handle_synthesis(error):
        logger.error(f'[api] Internal error: {str(error)}')
        return jsonify({'error': str(error)}), 500

    @app.errorhandler(QDTError)
    def handle_input(error):
        logger.error(f'[api] Error: {str(error)}')
        return jsonify({'error': str(error)}), 400

    @app.route('/api/health')
    def health_check():
        return jsonify({"status": "healthy"}), 200

    from service.routes import init_routes
    init_routes(app)
    return app


app = create_app()
