from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from . import __version__
from .deps import configure_logging, get_settings
from .routers import counts, curve, montecarlo, scan

settings = get_settings()
configure_logging(settings.log_level)

app = FastAPI(title="bellframe", version=__version__)

app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.cors_origins,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.get("/")
def health_check():
    return 'Health Check Complete'


app.include_router(scan.router)
app.include_router(curve.router)
app.include_router(montecarlo.router)
app.include_router(counts.router)
