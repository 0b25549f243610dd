"""Utils package initialization"""